//! Acceptance criteria. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line; the process fails if any criterion does.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bernstein_positive::analysis::{positivity_scan, verify_bound, Backend, VerifyConfig};
use bernstein_positive::combinatorics::{DegreeVector, MultiIndex};
use bernstein_positive::moments::{
    abs_moment_scaled, abs_moment_scaled_exact, bound_grid, boundary_layer, central_moments, lemma1_check,
    LemmaCheckConfig,
};
use bernstein_positive::operators::{error_profile, eval_q_pointwise, lorentz_q, vertices};
use bernstein_positive::oracle::{builtin, fd_check, FunctionOracle, Polynomial, REGISTRY};
use bernstein_positive::scalar::{ratio, Rational, Scalar};
use bernstein_positive::TensorBernstein;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SEED: u64 = 20240611;

// Tolerances
const LEMMA_SLACK: f64 = 1e-12;
const LEMMA_RUNTIME: Duration = Duration::from_secs(120);
const SCHWARTZ_TOL: f64 = 1e-12;
const BERNSTEIN_GRID_SLACK: f64 = 1.05;
const BERNSTEIN_RUNTIME: Duration = Duration::from_secs(300);
const QUADRATIC_TOL: f64 = 1e-10;
const VERTEX_FLOAT_TOL: f64 = 1e-12;
const RATE_VARIATION: f64 = 4.0;
const POSITIVITY_N_MAX: usize = 200;
const DUAL_PATH_TOL: f64 = 1e-10;
const DUAL_PATH_POINTS: usize = 1000;
const FD_TOL: f64 = 1e-5;
const FD_SAMPLES: usize = 200;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn dv(v: &[usize]) -> DegreeVector {
    DegreeVector::new(v.to_vec()).unwrap()
}

fn lemma_constants() -> Outcome {
    let cfg = LemmaCheckConfig { s_max: 4, n_max: 200, grid_size: 201, slack: LEMMA_SLACK, ..Default::default() };
    let start = Instant::now();
    let rep = lemma1_check(&cfg).unwrap();
    let took = start.elapsed();
    let ratios: Vec<String> = rep.orders.iter().map(|o| format!("s={}:{:.4}", o.s, o.max_ratio)).collect();
    outcome(
        rep.passed() && took < LEMMA_RUNTIME,
        format!("{} violations, max ratio {}, {:.2?}", rep.violations.len(), ratios.join(" "), took),
    )
}

fn equality_cases() -> Outcome {
    let mut bad = Vec::new();
    for n in 1..=50usize {
        let t = central_moments(n, 2).unwrap();
        let nn = Rational::from_integer(BigInt::from(n));
        let delta_sq = [Rational::zero(), Rational::one() / &nn, -Rational::one() / &nn];
        let poly_ok = t.scaled_poly(0) == [Rational::one()] && t.scaled_poly(2)[..] == delta_sq[..];
        let points_ok = (0..=40).all(|j| {
            let x = ratio(j, 40);
            let d2 = &x * (Rational::one() - &x) / &nn;
            abs_moment_scaled_exact(n, 0, &x).unwrap().is_one() && abs_moment_scaled_exact(n, 2, &x).unwrap() == d2
        });
        if !(poly_ok && points_ok) {
            bad.push(n);
        }
    }
    outcome(bad.is_empty(), format!("n=1..50, failing n: {bad:?}"))
}

fn endpoint_vanishing() -> Outcome {
    let bad: Vec<(usize, usize)> = (1..=200usize)
        .into_par_iter()
        .flat_map_iter(|n| (1..=8usize).map(move |s| (n, s)))
        .filter(|&(n, s)| {
            !(abs_moment_scaled_exact(n, s, &Rational::zero()).unwrap().is_zero()
                && abs_moment_scaled_exact(n, s, &Rational::one()).unwrap().is_zero())
        })
        .collect();
    outcome(bad.is_empty(), format!("n=1..200, s=1..8, nonzero cases: {}", bad.len()))
}

fn schwartz_chain() -> Outcome {
    let grid = bound_grid(201);
    let worst = (1..=200usize)
        .into_par_iter()
        .map(|n| {
            grid.iter()
                .chain(&boundary_layer(n))
                .map(|&x| {
                    let m: Vec<f64> = (2..=4).map(|s| abs_moment_scaled(n, s, x).unwrap()).collect();
                    m[1] - (m[0] * m[2]).sqrt()
                })
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    outcome(worst <= SCHWARTZ_TOL, format!("max T3 - sqrt(T2 T4) = {worst:.3e}"))
}

fn divisibility() -> Outcome {
    let mut bad = Vec::new();
    for n in 1..=50usize {
        let t = central_moments(n, 8).unwrap();
        for s in 2..=8 {
            let (_, rem) = t.divide_by_x_one_minus_x(s);
            if rem.iter().any(|c| !c.is_zero()) {
                bad.push((n, s));
            }
        }
    }
    outcome(bad.is_empty(), format!("n=1..50, s=2..8, nonzero remainders: {bad:?}"))
}

fn bernstein_bound() -> Outcome {
    let start = Instant::now();
    let mut worst = (0.0f64, String::new());
    let mut failures = Vec::new();
    for name in REGISTRY {
        for d in 1..=2usize {
            let f = builtin(name, d).unwrap();
            let n_list = [8, 16, 32, 64].iter().map(|&n| DegreeVector::uniform(d, n).unwrap()).collect::<Vec<_>>();
            let step = if d == 1 { 0.005 } else { 0.025 };
            for r in 0..=1 {
                let mut cfg = VerifyConfig::bernstein(r, n_list.clone(), step);
                cfg.relative_slack = BERNSTEIN_GRID_SLACK - 1.0;
                cfg.seed = SEED;
                let rep = verify_bound(&f, &cfg).unwrap();
                let label = format!("{name} d={d} r={r}");
                if rep.max_ratio > worst.0 {
                    worst = (rep.max_ratio, label.clone());
                }
                if !rep.passed() || rep.max_ratio > BERNSTEIN_GRID_SLACK || rep.zero_rhs_max_err > 1e-12 {
                    failures.push(label);
                }
            }
        }
    }
    let took = start.elapsed();
    outcome(
        failures.is_empty() && took < BERNSTEIN_RUNTIME,
        format!("max |f-B|/rhs = {:.4} ({}), failing: {failures:?}, {took:.2?}", worst.0, worst.1),
    )
}

fn random_quadratic(rng: &mut ChaCha8Rng, d: usize) -> FunctionOracle {
    let mut exps: Vec<Vec<usize>> = vec![vec![0; d]];
    for a in 0..d {
        let mut e = vec![0; d];
        e[a] = 1;
        exps.push(e.clone());
        e[a] = 2;
        exps.push(e);
        for b in a + 1..d {
            let mut e = vec![0; d];
            e[a] = 1;
            e[b] = 1;
            exps.push(e);
        }
    }
    let mut terms: Vec<(MultiIndex, Rational)> = exps[1..]
        .iter()
        .map(|e| (MultiIndex::new(e.clone()), ratio(rng.gen_range(-40..=40), rng.gen_range(1..=9))))
        .collect();
    // every monomial lies in [0,1] on the cube, so this constant keeps f >= 1
    let total: Rational = terms.iter().map(|(_, c)| c.abs()).fold(Rational::zero(), |a, b| a + b);
    terms.push((MultiIndex::new(exps[0].clone()), Rational::one() + total));
    FunctionOracle::polynomial("quadratic", Polynomial::new(d, terms).unwrap(), 1.0).unwrap()
}

fn quadratic_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut cases: Vec<(FunctionOracle, DegreeVector)> = Vec::new();
    for _ in 0..4 {
        let f = random_quadratic(&mut rng, 1);
        cases.extend((1..=20).map(|n| (f.clone(), dv(&[n]))));
    }
    let sizes = [1usize, 2, 5, 11, 20];
    for _ in 0..4 {
        let f = random_quadratic(&mut rng, 2);
        for &a in &sizes {
            for &b in &sizes {
                cases.push((f.clone(), dv(&[a, b])));
            }
        }
    }
    let worst = cases
        .par_iter()
        .map(|(f, n)| {
            let q: TensorBernstein = lorentz_q(f, n, 2).unwrap();
            error_profile(f, &q, if f.dim() == 1 { 0.005 } else { 0.025 }).unwrap().sup_error
        })
        .reduce(|| 0.0, f64::max);
    outcome(worst <= QUADRATIC_TOL, format!("{} cases, max sup error {worst:.3e}", cases.len()))
}

fn vertex_interpolation() -> Outcome {
    let mut cases = Vec::new();
    for name in REGISTRY {
        for d in 1..=2usize {
            for r in 0..=4usize {
                for n in [1usize, 4, 9] {
                    cases.push((*name, d, r, n));
                }
            }
        }
    }
    let results: Vec<(bool, f64)> = cases
        .par_iter()
        .map(|&(name, d, r, n)| {
            let f = builtin(name, d).unwrap();
            let n = DegreeVector::uniform(d, n).unwrap();
            let exact: TensorBernstein<Rational> = lorentz_q(&f, &n, r).unwrap();
            let float: TensorBernstein = lorentz_q(&f, &n, r).unwrap();
            let unit = DegreeVector::uniform(d, 1).unwrap();
            let mut exact_ok = true;
            let mut float_err = 0.0f64;
            for v in vertices(d) {
                let k = MultiIndex::new(v.iter().map(|&t| t as usize).collect());
                let want: Rational = f.sample(&MultiIndex::zeros(d), &k, &unit).unwrap();
                let vr: Vec<Rational> = v.iter().map(|&t| Rational::from_f64(t)).collect();
                exact_ok &= exact.eval(&vr).unwrap() == want;
                float_err = float_err.max((float.eval(&v).unwrap() - f.eval(&v)).abs());
            }
            (exact_ok, float_err)
        })
        .collect();
    let exact_fail = results.iter().filter(|r| !r.0).count();
    let float_max = results.iter().map(|r| r.1).fold(0.0, f64::max);
    outcome(
        exact_fail == 0 && float_max <= VERTEX_FLOAT_TOL,
        format!("{} cases, exact mismatches {exact_fail}, float max {float_max:.3e}", cases.len()),
    )
}

fn rate_stability() -> Outcome {
    let f = builtin("smooth_bump", 1).unwrap();
    let n_list: Vec<DegreeVector> = [8, 16, 32, 64, 128, 256].iter().map(|&n| dv(&[n])).collect();
    let rep = verify_bound(&f, &VerifyConfig::lorentz(2, n_list, 0.002)).unwrap();
    let fitted: Vec<String> = rep.per_degree.iter().map(|s| format!("{:.4}", s.fitted_constant)).collect();
    let decreasing = rep.per_degree.windows(2).all(|w| w[1].sup_error < w[0].sup_error);
    outcome(
        rep.fitted_variation < RATE_VARIATION && decreasing,
        format!(
            "fitted constants [{}], variation {:.3}x, sup error decreasing: {decreasing}",
            fitted.join(", "),
            rep.fitted_variation
        ),
    )
}

fn positivity_threshold() -> Outcome {
    let f = builtin("quadratic_shifted", 1).unwrap();
    // the registry entry is 1 + x(1-x)
    let formula_ok = (0..=10).all(|k| {
        let x = ratio(k, 10);
        let want = Rational::one() + &x * (Rational::one() - &x);
        f.deriv_exact(&MultiIndex::zeros(1), &[x]).unwrap() == Some(want)
    });
    let rep = positivity_scan(&f, 2, POSITIVITY_N_MAX, Backend::Exact).unwrap();
    let min = rep.trace.iter().map(|s| s.min_coefficient).fold(f64::INFINITY, f64::min);
    match rep.threshold {
        Some(n0) if formula_ok && n0 <= POSITIVITY_N_MAX => {
            outcome(true, format!("n0 = {n0}, smallest coefficient over n=1..200: {min}"))
        }
        t => outcome(false, format!("threshold {t:?}, formula ok: {formula_ok}")),
    }
}

fn dual_path() -> Outcome {
    let mut cases = Vec::new();
    for name in REGISTRY {
        for d in 1..=2usize {
            for r in 0..=4usize {
                cases.push((*name, d, r));
            }
        }
    }
    let worst = cases
        .par_iter()
        .enumerate()
        .map(|(idx, &(name, d, r))| {
            let f = builtin(name, d).unwrap();
            let n = if d == 1 { dv(&[24]) } else { dv(&[7, 11]) };
            let q: TensorBernstein = lorentz_q(&f, &n, r).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(SEED + idx as u64);
            (0..DUAL_PATH_POINTS)
                .map(|_| {
                    let x: Vec<f64> = (0..d).map(|_| rng.gen::<f64>()).collect();
                    (q.eval(&x).unwrap() - eval_q_pointwise(&f, &n, r, &x).unwrap()).abs()
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    outcome(
        worst <= DUAL_PATH_TOL,
        format!("{} cases x {DUAL_PATH_POINTS} points, max difference {worst:.3e}", cases.len()),
    )
}

fn oracle_hygiene() -> Outcome {
    let mut worst = (0.0f64, String::new());
    for name in REGISTRY {
        for d in 1..=3usize {
            let rep = fd_check(&builtin(name, d).unwrap(), FD_SAMPLES, SEED);
            if rep.max_rel_error > worst.0 || rep.max_rel_error.is_nan() {
                worst = (rep.max_rel_error, format!("{name} d={d}"));
            }
        }
    }
    outcome(worst.0 <= FD_TOL, format!("max relative error {:.3e} ({})", worst.0, worst.1))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("moment bound constants A_0..A_4", lemma_constants),
        ("equality at s = 0 and s = 2", equality_cases),
        ("endpoint vanishing", endpoint_vanishing),
        ("Cauchy-Schwarz chain", schwartz_chain),
        ("divisibility by x(1-x)", divisibility),
        ("Bernstein bound with constant d+1", bernstein_bound),
        ("quadratic exactness of Q_{n,2}", quadratic_exactness),
        ("vertex interpolation", vertex_interpolation),
        ("rate stability", rate_stability),
        ("positivity threshold", positivity_threshold),
        ("dual-path consistency", dual_path),
        ("oracle hygiene", oracle_hygiene),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        if !o.ok {
            failed += 1;
        }
        let tag = if o.ok { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} {name}: {} [{:.2?}]", i + 1, o.detail, start.elapsed());
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
