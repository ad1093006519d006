//! Central and absolute moments of the binomial kernel, the local scale
//! functions `delta_n`, `Delta_n`, `D_n`, and the sharpened moment-bound check.
//!
//! Central moments `T_{ns}(x) = sum_k (k - nx)^s p_{nk}(x)` are integer
//! polynomials in `x`, generated exactly by
//! `T_{n,s+1} = x(1-x) [T'_{ns} + n s T_{n,s-1}]`.
//! Absolute moments of odd order have no polynomial form and are summed directly.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bernstein::{basis_row, BernsteinPoly1D};
use crate::combinatorics::{binomial_row, DegreeVector};
use crate::error::{domain, Result};
use crate::scalar::{Rational, Scalar};

/// Moment-bound constants `A_0..A_4`.
pub const LEMMA1_CONSTANTS: [f64; 5] = [1.0, 1.0, 1.0, 2.0, 4.0];

/// Absolute slack allowed on top of the moment bound.
pub const LEMMA1_SLACK: f64 = 1e-12;

fn check_unit(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(domain!("t = {t} lies outside [0, 1]"))
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(domain!("n must be >= 1"))
    } else {
        Ok(())
    }
}

/// `delta_n(t) = sqrt(t(1-t)/n)`.
pub fn delta_n(n: usize, t: f64) -> Result<f64> {
    check_n(n)?;
    check_unit(t)?;
    Ok((t * (1.0 - t) / n as f64).sqrt())
}

/// `Delta_n(t) = max(1/n, delta_n(t))`.
pub fn big_delta_n(n: usize, t: f64) -> Result<f64> {
    Ok(delta_n(n, t)?.max(1.0 / n as f64))
}

/// `D_n(x) = max_j Delta_{n_j}(x_j)`.
pub fn d_n(n: &DegreeVector, x: &[f64]) -> Result<f64> {
    if x.len() != n.dim() {
        return Err(domain!("point has {} coordinates, degree vector {}", x.len(), n.dim()));
    }
    x.iter()
        .zip(n.entries())
        .try_fold(0.0f64, |acc, (&t, &nj)| Ok(acc.max(big_delta_n(nj, t)?)))
}

type IntPoly = Vec<BigInt>;

fn trim(mut p: IntPoly) -> IntPoly {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    if p.is_empty() {
        p.push(BigInt::zero());
    }
    p
}

fn derivative(p: &[BigInt]) -> IntPoly {
    trim(p.iter().enumerate().skip(1).map(|(k, c)| c * k).collect())
}

fn add_polys(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let len = a.len().max(b.len());
    trim(
        (0..len)
            .map(|k| {
                a.get(k).cloned().unwrap_or_default() + b.get(k).cloned().unwrap_or_default()
            })
            .collect(),
    )
}

/// Multiply by `x - x^2`.
fn times_x_one_minus_x(p: &[BigInt]) -> IntPoly {
    let mut out = vec![BigInt::zero(); p.len() + 2];
    for (k, c) in p.iter().enumerate() {
        out[k + 1] += c;
        out[k + 2] -= c;
    }
    trim(out)
}

/// Long division of `num` by `den`, whose leading coefficient must be +-1.
pub fn int_poly_div_rem(num: &[BigInt], den: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let den = trim(den.to_vec());
    let lead = den.last().expect("nonempty").clone();
    assert!(lead.abs().is_one(), "divisor must have unit leading coefficient");
    let mut rem = trim(num.to_vec());
    if rem.len() < den.len() {
        return (vec![BigInt::zero()], rem);
    }
    let mut quot = vec![BigInt::zero(); rem.len() - den.len() + 1];
    for shift in (0..quot.len()).rev() {
        let c = &rem[shift + den.len() - 1] * &lead;
        for (k, d) in den.iter().enumerate() {
            rem[shift + k] -= &c * d;
        }
        quot[shift] = c;
    }
    (trim(quot), trim(rem))
}

fn eval_int_poly_exact(p: &[BigInt], x: &Rational) -> Rational {
    p.iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * x + Rational::from_integer(c.clone()))
}

/// Exact monomial coefficients of `T_{n0}, ..., T_{n,s_max}`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentTable {
    n: usize,
    polys: Vec<IntPoly>,
}

/// Build the central-moment table for degree `n` up to order `s_max`.
pub fn central_moments(n: usize, s_max: usize) -> Result<MomentTable> {
    check_n(n)?;
    let mut polys: Vec<IntPoly> = vec![vec![BigInt::one()]];
    if s_max >= 1 {
        polys.push(vec![BigInt::zero()]);
    }
    for s in 1..s_max {
        let inner = add_polys(
            &derivative(&polys[s]),
            &polys[s - 1].iter().map(|c| c * (n * s)).collect::<Vec<_>>(),
        );
        polys.push(times_x_one_minus_x(&inner));
    }
    Ok(MomentTable { n, polys })
}

impl MomentTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s_max(&self) -> usize {
        self.polys.len() - 1
    }

    /// Monomial coefficients of `T_{ns}`, constant term first.
    pub fn poly(&self, s: usize) -> &[BigInt] {
        &self.polys[s]
    }

    /// Monomial coefficients of the scaled moment `n^{-s} T_{ns}`.
    pub fn scaled_poly(&self, s: usize) -> Vec<Rational> {
        let denom = BigInt::from(self.n).pow(s as u32);
        self.polys[s]
            .iter()
            .map(|c| Rational::new(c.clone(), denom.clone()))
            .collect()
    }

    /// `n^{-s} T_{ns}` in the degree-`s` Bernstein basis, exactly.
    pub fn scaled_bernstein(&self, s: usize) -> BernsteinPoly1D<Rational> {
        BernsteinPoly1D::from_monomial_with_degree(&self.scaled_poly(s), s)
            .expect("T_ns has degree at most s")
    }

    pub fn eval_exact(&self, s: usize, x: &Rational) -> Rational {
        eval_int_poly_exact(&self.polys[s], x)
    }

    pub fn eval_scaled_exact(&self, s: usize, x: &Rational) -> Rational {
        self.eval_exact(s, x) / Rational::from_integer(BigInt::from(self.n).pow(s as u32))
    }

    /// `T_{ns}(x)`, evaluated exactly at the float `x` and rounded once.
    pub fn eval(&self, s: usize, x: f64) -> f64 {
        self.eval_exact(s, &Rational::from_f64(x)).to_f64()
    }

    /// `n^{-s} T_{ns}(x)`, rounded once.
    pub fn eval_scaled(&self, s: usize, x: f64) -> f64 {
        self.eval_scaled_exact(s, &Rational::from_f64(x)).to_f64()
    }

    /// Quotient and remainder of `T_{ns}` divided by `x(1-x)`.
    pub fn divide_by_x_one_minus_x(&self, s: usize) -> (Vec<BigInt>, Vec<BigInt>) {
        let den = vec![BigInt::zero(), BigInt::one(), -BigInt::one()];
        int_poly_div_rem(&self.polys[s], &den)
    }
}

/// Unscaled absolute moment `T*_{ns}(x) = sum_k |k - nx|^s p_{nk}(x)`.
pub fn abs_moment(n: usize, s: usize, x: f64) -> Result<f64> {
    Ok(abs_moment_scaled(n, s, x)? * (n as f64).powi(s as i32))
}

/// Scaled absolute moment `n^{-s} T*_{ns}(x)`.
pub fn abs_moment_scaled(n: usize, s: usize, x: f64) -> Result<f64> {
    Ok(abs_moments_scaled(n, s, x)?[s])
}

/// `n^{-s} T*_{ns}(x)` for every `s <= s_max`, from a single basis row.
pub fn abs_moments_scaled(n: usize, s_max: usize, x: f64) -> Result<Vec<f64>> {
    check_n(n)?;
    let row = basis_row(n, x)?;
    let mut out = vec![0.0; s_max + 1];
    for (k, p) in row.iter().enumerate() {
        if *p == 0.0 {
            continue;
        }
        let dev = (k as f64 / n as f64 - x).abs();
        let mut pow = 1.0;
        for slot in out.iter_mut() {
            *slot += pow * p;
            pow *= dev;
        }
    }
    Ok(out)
}

/// Exact scaled absolute moment at a rational point.
pub fn abs_moment_scaled_exact(n: usize, s: usize, x: &Rational) -> Result<Rational> {
    check_n(n)?;
    if *x < Rational::zero() || *x > Rational::one() {
        return Err(domain!("x lies outside [0, 1]"));
    }
    let one_minus = Rational::one() - x;
    let nn = Rational::from_integer(BigInt::from(n));
    let mut total = Rational::zero();
    for (k, c) in binomial_row(n).into_iter().enumerate() {
        let p = Rational::from_integer(BigInt::from(c))
            * num_traits::pow(x.clone(), k)
            * num_traits::pow(one_minus.clone(), n - k);
        let dev = (Rational::from_integer(BigInt::from(k)) / &nn - x).abs();
        total += num_traits::pow(dev, s) * p;
    }
    Ok(total)
}

/// Shape `delta_n^{min(2,s)} Delta_n^{max(0,s-2)}` of the moment bound.
pub fn lemma1_shape(n: usize, s: usize, x: f64) -> Result<f64> {
    let d = delta_n(n, x)?;
    let big = big_delta_n(n, x)?;
    Ok(d.powi(s.min(2) as i32) * big.powi(s.saturating_sub(2) as i32))
}

/// Right side `A_s delta_n^{min(2,s)} Delta_n^{max(0,s-2)}`.
pub fn lemma1_rhs(n: usize, s: usize, x: f64, a_s: f64) -> Result<f64> {
    if a_s <= 0.0 {
        return Err(domain!("constant A_{s} must be positive"));
    }
    Ok(a_s * lemma1_shape(n, s, x)?)
}

/// Uniform grid of `points` nodes on [0,1] plus `10^-k` and `1 - 10^-k`, `k = 1..6`.
pub fn bound_grid(points: usize) -> Vec<f64> {
    let mut grid: Vec<f64> = match points {
        0 => Vec::new(),
        1 => vec![0.5],
        _ => (0..points).map(|k| k as f64 / (points - 1) as f64).collect(),
    };
    grid.extend([0.0, 1.0]);
    for k in 1..=6 {
        let e = 10f64.powi(-k);
        grid.extend([e, 1.0 - e]);
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Extra nodes `j / (64 n)` for `j = 1..=256` and their mirrors: the sup of
/// `T*_{ns} / shape` for `s > 2` sits near `x = 1/n`, where the scale switches
/// from `delta_n` to `1/n`.
pub fn boundary_layer(n: usize) -> Vec<f64> {
    let step = 1.0 / (64 * n) as f64;
    (1..=256)
        .map(|j| j as f64 * step)
        .filter(|&x| x < 0.5)
        .flat_map(|x| [x, 1.0 - x])
        .collect()
}

/// `T*_{n3} - sqrt(T*_{n2} T*_{n4})`, scaled; nonpositive by Cauchy-Schwarz.
pub fn schwartz_excess(n: usize, x: f64) -> Result<f64> {
    let m = abs_moments_scaled(n, 4, x)?;
    Ok(m[3] - (m[2] * m[4]).sqrt())
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaCheckConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub s_max: usize,
    pub grid_size: usize,
    /// Declared constants for the orders they cover; orders beyond are fitted.
    pub constants: Vec<f64>,
    pub slack: f64,
    /// Degrees at which fitted constants are compared for stability.
    pub stability_ns: Vec<usize>,
    /// Largest tolerated relative change of a fitted constant between successive stability degrees.
    pub stability_tolerance: f64,
}

impl Default for LemmaCheckConfig {
    fn default() -> Self {
        Self {
            n_min: 1,
            n_max: 200,
            s_max: 8,
            grid_size: 201,
            constants: LEMMA1_CONSTANTS.to_vec(),
            slack: LEMMA1_SLACK,
            stability_ns: vec![25, 50, 100, 200],
            stability_tolerance: 0.10,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct MomentRow {
    pub n: usize,
    pub s: usize,
    pub x: f64,
    pub tbar_star: f64,
    pub rhs: f64,
    pub ratio: f64,
}

impl MomentRow {
    pub const CSV_HEADER: &'static str = "n,s,x,Tbar_star,rhs,ratio";

    pub fn to_csv(&self) -> String {
        format!("{},{},{},{},{},{}", self.n, self.s, self.x, self.tbar_star, self.rhs, self.ratio)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderSummary {
    pub s: usize,
    pub declared_constant: Option<f64>,
    /// `sup T*_{ns} / shape` over points where the shape is positive.
    pub fitted_constant: f64,
    /// `fitted_constant / declared_constant` (or the fitted value when undeclared).
    pub max_ratio: f64,
    pub violations: usize,
    /// Largest moment found where the shape vanishes; must be zero.
    pub zero_shape_max: f64,
    pub fitted_by_n: Vec<(usize, f64)>,
    /// Largest relative change of the fitted constant between successive stability degrees.
    pub max_relative_change: Option<f64>,
    pub stable: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaViolation {
    pub n: usize,
    pub s: usize,
    pub x: f64,
    pub tbar_star: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub config: LemmaCheckConfig,
    pub orders: Vec<OrderSummary>,
    pub violations: Vec<LemmaViolation>,
    /// For s = 0 and s = 2: `max |T*/shape - 1|` over interior points.
    pub equality_max_deviation: Vec<(usize, f64)>,
    /// `max (T*_3 - sqrt(T*_2 T*_4))` over the grid, when `s_max >= 4`.
    pub schwartz_max_excess: Option<f64>,
}

impl LemmaReport {
    /// True when no declared constant is exceeded.
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Default)]
struct Accum {
    fitted: f64,
    violations: Vec<LemmaViolation>,
    zero_shape_max: f64,
    equality_dev: f64,
}

/// Sweep `n_min..=n_max`, `0..=s_max` over [`bound_grid`] plus
/// [`boundary_layer`] and compare each absolute moment with its bound.
pub fn lemma1_check(cfg: &LemmaCheckConfig) -> Result<LemmaReport> {
    check_n(cfg.n_min)?;
    let grid = bound_grid(cfg.grid_size);
    let s_max = cfg.s_max;
    let per_n: Vec<(usize, Vec<Accum>, f64)> = (cfg.n_min..=cfg.n_max)
        .into_par_iter()
        .map(|n| -> Result<_> {
            let mut acc = vec![Accum::default(); s_max + 1];
            let mut schwartz = f64::NEG_INFINITY;
            for &x in grid.iter().chain(&boundary_layer(n)) {
                let moments = abs_moments_scaled(n, s_max, x)?;
                if s_max >= 4 {
                    schwartz = schwartz.max(moments[3] - (moments[2] * moments[4]).sqrt());
                }
                for (s, &m) in moments.iter().enumerate() {
                    let shape = lemma1_shape(n, s, x)?;
                    let a = &mut acc[s];
                    if shape > 0.0 {
                        let ratio = m / shape;
                        a.fitted = a.fitted.max(ratio);
                        if s == 0 || s == 2 {
                            a.equality_dev = a.equality_dev.max((ratio - 1.0).abs());
                        }
                    } else {
                        a.zero_shape_max = a.zero_shape_max.max(m);
                    }
                    if let Some(&a_s) = cfg.constants.get(s) {
                        let rhs = a_s * shape;
                        if m > rhs + cfg.slack {
                            a.violations.push(LemmaViolation { n, s, x, tbar_star: m, rhs });
                        }
                    }
                }
            }
            Ok((n, acc, schwartz))
        })
        .collect::<Result<_>>()?;

    let mut orders = Vec::with_capacity(s_max + 1);
    let mut violations = Vec::new();
    let mut equality = Vec::new();
    for s in 0..=s_max {
        let declared = cfg.constants.get(s).copied();
        let mut fitted = 0.0f64;
        let mut zero_shape_max = 0.0f64;
        let mut count = 0;
        let mut eq_dev = 0.0f64;
        let mut fitted_by_n = Vec::new();
        for (n, acc, _) in &per_n {
            let a = &acc[s];
            fitted = fitted.max(a.fitted);
            zero_shape_max = zero_shape_max.max(a.zero_shape_max);
            eq_dev = eq_dev.max(a.equality_dev);
            count += a.violations.len();
            violations.extend(a.violations.iter().cloned());
            if cfg.stability_ns.contains(n) {
                fitted_by_n.push((*n, a.fitted));
            }
        }
        let max_relative_change = fitted_by_n
            .windows(2)
            .map(|w| (w[1].1 / w[0].1 - 1.0).abs())
            .reduce(f64::max);
        if s == 0 || s == 2 {
            equality.push((s, eq_dev));
        }
        orders.push(OrderSummary {
            s,
            declared_constant: declared,
            fitted_constant: fitted,
            max_ratio: declared.map_or(fitted, |a| fitted / a),
            violations: count,
            zero_shape_max,
            stable: max_relative_change.is_none_or(|c| c <= cfg.stability_tolerance),
            fitted_by_n,
            max_relative_change,
        });
    }
    let schwartz_max_excess = (s_max >= 4)
        .then(|| per_n.iter().map(|(_, _, e)| *e).fold(f64::NEG_INFINITY, f64::max));
    Ok(LemmaReport {
        config: cfg.clone(),
        orders,
        violations,
        equality_max_deviation: equality,
        schwartz_max_excess,
    })
}

/// Rows `n, s, x, T*, rhs, ratio` on a uniform grid of `grid` points.
/// Orders without a declared constant use `A_s = 1`.
pub fn moment_rows(n: usize, s_max: usize, grid: usize) -> Result<Vec<MomentRow>> {
    check_n(n)?;
    let xs: Vec<f64> = match grid {
        0 => Vec::new(),
        1 => vec![0.5],
        g => (0..g).map(|k| k as f64 / (g - 1) as f64).collect(),
    };
    let mut rows = Vec::with_capacity((s_max + 1) * xs.len());
    let moments: Vec<Vec<f64>> =
        xs.iter().map(|&x| abs_moments_scaled(n, s_max, x)).collect::<Result<_>>()?;
    for s in 0..=s_max {
        let a_s = LEMMA1_CONSTANTS.get(s).copied().unwrap_or(1.0);
        for (x, m) in xs.iter().zip(&moments) {
            let rhs = lemma1_rhs(n, s, *x, a_s)?;
            rows.push(MomentRow { n, s, x: *x, tbar_star: m[s], rhs, ratio: m[s] / rhs });
        }
    }
    Ok(rows)
}
