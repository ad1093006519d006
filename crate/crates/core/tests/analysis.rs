use bernstein_positive::analysis::{
    density_demo, positivity_scan, rhs_thm1_i, rhs_thm1_ii, verify_bound, Backend, Builder, RhsKind, VerifyConfig,
};
use bernstein_positive::combinatorics::{DegreeVector, MultiIndex};
use bernstein_positive::moments::{big_delta_n, delta_n};
use bernstein_positive::operators::{error_profile, lorentz_q, vertices};
use bernstein_positive::oracle::{builtin, modulus, FunctionOracle, OrderModulus, Polynomial};
use bernstein_positive::scalar::ratio;
use bernstein_positive::{Error, TensorBernstein};

fn dv(v: &[usize]) -> DegreeVector {
    DegreeVector::new(v.to_vec()).unwrap()
}

fn sweep(d: usize) -> Vec<DegreeVector> {
    [8, 16, 32, 64, 128, 256].iter().map(|&n| DegreeVector::uniform(d, n).unwrap()).collect()
}

#[test]
fn bernstein_rhs_cases() {
    let f = builtin("smooth_bump", 1).unwrap();
    let om0 = OrderModulus::build(&f, 0, 1e-4, 0.5, 0).unwrap();
    let om1 = OrderModulus::build(&f, 1, 1e-4, 0.5, 0).unwrap();
    let n = dv(&[30]);
    assert_eq!(rhs_thm1_i(&om1, &n, &[0.0], 1).unwrap(), 0.0);
    assert_eq!(rhs_thm1_i(&om1, &n, &[1.0], 1).unwrap(), 0.0);
    for x in [0.1, 0.37, 0.5] {
        let h = delta_n(30, x).unwrap();
        let g = |p: &[f64]| f.eval(p);
        let direct = modulus(&g, 1, h, 1e-4).unwrap().value;
        assert!((rhs_thm1_i(&om0, &n, &[x], 0).unwrap() - 2.0 * direct).abs() < 1e-12);
    }
    assert!(rhs_thm1_i(&om0, &n, &[0.5], 2).is_err());

    let f2 = builtin("smooth_bump", 2).unwrap();
    let om = OrderModulus::build(&f2, 1, 0.005, 0.3, 0).unwrap();
    let v = rhs_thm1_i(&om, &dv(&[25, 25]), &[0.5, 0.5], 1).unwrap();
    // 3 omega(0.1) * 0.2
    assert!(v > 0.0 && (v - 3.0 * om.at(0.1) * 0.2).abs() < 1e-12);
    assert!(rhs_thm1_i(&om, &dv(&[25, 25]), &[0.5], 1).is_err());
}

#[test]
fn corrected_rhs_cases() {
    let f = builtin("smooth_bump", 2).unwrap();
    let om = OrderModulus::build(&f, 3, 0.01, 0.5, 0).unwrap();
    for v in vertices(2) {
        assert_eq!(rhs_thm1_ii(&om, &dv(&[9, 12]), &v, 3, 123.0).unwrap(), 0.0);
    }
    let g = builtin("smooth_bump", 1).unwrap();
    let om1 = OrderModulus::build(&g, 3, 1e-4, 0.5, 0).unwrap();
    for x in [0.01, 0.2, 0.5] {
        let (d, big) = (delta_n(50, x).unwrap(), big_delta_n(50, x).unwrap());
        let want = 2.5 * d * d * big * om1.at(big);
        assert!((rhs_thm1_ii(&om1, &dv(&[50]), &[x], 3, 2.5).unwrap() - want).abs() < 1e-15);
    }
    // n = 4 on one axis: D_n = 1/4 whatever x is
    let om2 = OrderModulus::build(&f, 2, 0.01, 0.5, 0).unwrap();
    let x = [0.5, 0.3];
    let sum = delta_n(4, 0.5).unwrap() + delta_n(100, 0.3).unwrap();
    let want = om2.at(0.25) * sum * sum;
    assert!((rhs_thm1_ii(&om2, &dv(&[4, 100]), &x, 2, 1.0).unwrap() - want).abs() < 1e-15);
    assert!(rhs_thm1_ii(&om2, &dv(&[4, 100]), &x, 1, 1.0).is_err());
    assert!(rhs_thm1_ii(&om2, &dv(&[4, 100]), &x, 2, 0.0).is_err());
}

#[test]
fn bernstein_bound_smooth_bump() {
    let f = builtin("smooth_bump", 1).unwrap();
    let cfg = VerifyConfig::bernstein(0, sweep(1), 0.005);
    let rep = verify_bound(&f, &cfg).unwrap();
    assert!(rep.passed(), "{:?}", &rep.violations[..rep.violations.len().min(3)]);
    // the constant d+1 is inside rhs, so ratios stay below 1 + 5%
    assert!(rep.max_ratio <= 1.05, "{}", rep.max_ratio);
    assert!(rep.zero_rhs_max_err <= 1e-12);
    assert!(rep.modulus_resolution_ok);
    assert_eq!(rep.fitted_constant, rep.max_ratio);
    let max_case = rep.cases.iter().filter(|c| c.rhs > 0.0).map(|c| c.ratio).fold(0.0, f64::max);
    assert_eq!(max_case, rep.fitted_constant);
}

#[test]
fn corrected_bound_rate() {
    let f = builtin("smooth_bump", 1).unwrap();
    let cfg = VerifyConfig::lorentz(2, sweep(1), 0.005);
    let rep = verify_bound(&f, &cfg).unwrap();
    assert!(rep.passed());
    assert!(rep.zero_rhs_max_err <= 1e-12);
    for w in rep.per_degree.windows(2) {
        let change = w[1].fitted_constant / w[0].fitted_constant;
        assert!((0.5..=2.0).contains(&change), "{:?}", rep.per_degree);
        assert!(w[1].sup_error < w[0].sup_error);
    }
}

#[test]
fn declared_constant_violation_is_reported() {
    let f = builtin("smooth_bump", 1).unwrap();
    let mut cfg = VerifyConfig::lorentz(2, vec![dv(&[16])], 0.01);
    cfg.declared_constant = Some(1e-3);
    let rep = verify_bound(&f, &cfg).unwrap();
    assert!(!rep.passed());
    assert!(rep.violations.iter().all(|c| c.observed > 1e-3 * c.rhs));
    let bad = VerifyConfig { rhs: RhsKind::CorrectedBound, ..VerifyConfig::bernstein(0, vec![dv(&[8])], 0.1) };
    assert!(matches!(verify_bound(&f, &bad), Err(Error::Domain(_))));
    let bad = VerifyConfig { builder: Builder::Lorentz, rhs: RhsKind::BernsteinBound, ..VerifyConfig::lorentz(3, vec![dv(&[8])], 0.1) };
    assert!(verify_bound(&f, &bad).is_err());
}

#[test]
fn monte_carlo_in_three_dimensions() {
    let f = builtin("runge_shifted", 3).unwrap();
    let mut cfg = VerifyConfig::bernstein(1, vec![dv(&[6, 6, 6])], 0.25);
    cfg.seed = 9;
    let a = verify_bound(&f, &cfg).unwrap();
    let b = verify_bound(&f, &cfg).unwrap();
    assert_eq!(a.seed, 9);
    assert_eq!(a.cases.len(), 10_000 + 8);
    assert_eq!(a.max_ratio, b.max_ratio);
    assert!(a.zero_rhs_max_err <= 1e-12);
}

#[test]
fn report_json_schema() {
    let f = builtin("affine", 2).unwrap();
    let rep = verify_bound(&f, &VerifyConfig::bernstein(1, vec![dv(&[4, 4])], 0.25)).unwrap();
    let v: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
    for key in ["case", "max_ratio", "fitted_constant", "vertex_max_err", "violations"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    for key in ["func", "d", "n", "r"] {
        assert!(v["case"].get(key).is_some(), "missing case.{key}");
    }
    assert!(rep.cases_csv().lines().count() > 1);
}

#[test]
fn scaling_leaves_ratios_unchanged() {
    let f = builtin("runge_shifted", 1).unwrap();
    let g = f.with_transform(3.5, 0.0).unwrap();
    let n = dv(&[20]);
    let pf: TensorBernstein = lorentz_q(&f, &n, 2).unwrap();
    let pg: TensorBernstein = lorentz_q(&g, &n, 2).unwrap();
    let (ef, eg) = (error_profile(&f, &pf, 0.01).unwrap(), error_profile(&g, &pg, 0.01).unwrap());
    for (a, b) in ef.abs_errors.iter().zip(&eg.abs_errors) {
        assert!((3.5 * a - b).abs() <= 1e-12);
    }
    let cfg = VerifyConfig::lorentz(2, vec![n], 0.01);
    let (rf, rg) = (verify_bound(&f, &cfg).unwrap(), verify_bound(&g, &cfg).unwrap());
    assert!((rf.max_ratio - rg.max_ratio).abs() <= 1e-10 * rf.max_ratio.max(1.0));
}

#[test]
fn error_vanishes_towards_vertices() {
    let f = builtin("smooth_bump", 1).unwrap();
    let n = 64usize;
    let q: TensorBernstein = lorentz_q(&f, &dv(&[n]), 2).unwrap();
    for x in [0.0, 1.0] {
        assert!((q.eval(&[x]).unwrap() - f.eval(&[x])).abs() <= 1e-12);
    }
    let rep = verify_bound(&f, &VerifyConfig::lorentz(2, vec![dv(&[n])], 1.0 / 256.0)).unwrap();
    let om = OrderModulus::build(&f, 2, 1e-4, 0.5, 0).unwrap();
    let x = 1.0 / n as f64;
    let err = (q.eval(&[x]).unwrap() - f.eval(&[x])).abs();
    let rhs = rhs_thm1_ii(&om, &dv(&[n]), &[x], 2, rep.fitted_constant).unwrap();
    assert!(err <= rhs * 1.05, "{err} vs {rhs}");
    // the ratio to delta^2 stays bounded near the ends
    let near: Vec<f64> = (1..=8)
        .map(|k| {
            let t = k as f64 / (4.0 * n as f64);
            (q.eval(&[t]).unwrap() - f.eval(&[t])).abs() / delta_n(n, t).unwrap().powi(2)
        })
        .collect();
    let mid = (q.eval(&[0.5]).unwrap() - f.eval(&[0.5])).abs() / delta_n(n, 0.5).unwrap().powi(2);
    assert!(near.iter().all(|&r| r.is_finite() && r <= 10.0 * mid.max(1e-3)), "{near:?} {mid}");
}

#[test]
fn positivity_low_orders() {
    for name in ["smooth_bump", "runge_shifted"] {
        let f = builtin(name, 1).unwrap();
        for r in 0..=1 {
            let rep = positivity_scan(&f, r, 20, Backend::Exact).unwrap();
            assert_eq!(rep.threshold, Some(1), "{name} r={r}");
            assert_eq!(rep.trace.len(), 20);
        }
    }
}

#[test]
fn positivity_quadratic() {
    let f = builtin("quadratic_shifted", 1).unwrap();
    let rep = positivity_scan(&f, 2, 60, Backend::Exact).unwrap();
    let n0 = rep.threshold.unwrap();
    assert!(rep.trace.iter().filter(|s| s.n >= n0).all(|s| s.nonnegative && s.min_coefficient >= 0.0));
    let float = positivity_scan(&f, 2, 60, Backend::Float).unwrap();
    assert_eq!(float.threshold, rep.threshold);
    assert!(rep.trace.iter().all(|s| s.exact_min.is_some()));
}

#[test]
fn positivity_threshold_grows_as_m_shrinks() {
    // m + (x - 1/2)^2: the middle coefficient at degree N is m - 1/(4(N-1)),
    // so Q (which reproduces quadratics) turns positive once N >= 1 + 1/(4m)
    let base = builtin("parabola_shifted", 1).unwrap();
    let mut last = 0;
    for shift in [0.0, -0.03, -0.04, -0.045] {
        let f = base.with_transform(1.0, shift).unwrap();
        let m = f.lower_bound_m();
        let rep = positivity_scan(&f, 2, 100, Backend::Exact).unwrap();
        let n0 = rep.threshold.expect("finite threshold");
        let predicted = (1.0 + 1.0 / (4.0 * m)).ceil() as usize - 2;
        assert!(n0.abs_diff(predicted) <= 1, "m={m}: {n0} vs {predicted}");
        assert!(n0 > last, "m={m}: {n0} <= {last}");
        last = n0;
    }
}

#[test]
fn positivity_requires_positive_lower_bound() {
    let f = builtin("const_c", 1).unwrap().with_transform(1.0, -1.0).unwrap();
    assert!(matches!(positivity_scan(&f, 2, 10, Backend::Exact), Err(Error::Precondition(_))));
}

#[test]
fn density_of_unit_mass_quadratic() {
    // (6/7)(1 + x(1 - x)) integrates to one
    let terms = vec![
        (MultiIndex::new(vec![0]), ratio(6, 7)),
        (MultiIndex::new(vec![1]), ratio(6, 7)),
        (MultiIndex::new(vec![2]), ratio(-6, 7)),
    ];
    let f = FunctionOracle::polynomial("unit", Polynomial::new(1, terms).unwrap(), 6.0 / 7.0).unwrap();
    let demo = density_demo(&f, &dv(&[12]), 2, 0.01).unwrap();
    assert!((demo.normalization - 1.0).abs() <= 1e-10);
    assert!((demo.density.integral() - 1.0).abs() <= 1e-12);
    assert!((demo.target_mass - 1.0).abs() <= 1e-10);
    assert!(demo.density_sup_error <= 1e-10);
}

#[test]
fn density_boundary_versus_interior() {
    for d in 1..=2 {
        let f = builtin("smooth_bump", d).unwrap();
        for n in [16usize, 32] {
            let demo = density_demo(&f, &DegreeVector::uniform(d, n).unwrap(), 2, if d == 1 { 0.005 } else { 0.05 }).unwrap();
            assert!((demo.density.integral() - 1.0).abs() <= 1e-12);
            assert!(demo.vertex_errors.iter().all(|&e| e <= demo.interior_median_error));
        }
    }
    let zero = builtin("const_c", 1).unwrap().with_transform(1.0, -1.0).unwrap();
    assert!(matches!(density_demo(&zero, &dv(&[4]), 2, 0.1), Err(Error::Precondition(_))));
}
