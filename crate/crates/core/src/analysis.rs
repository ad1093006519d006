//! Empirical verification of the non-uniform error bounds, positivity
//! threshold scans, and density normalization.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bernstein::TensorBernstein;
use crate::combinatorics::{DegreeVector, MultiIndex};
use crate::error::{contract, domain, Error, Result};
use crate::moments::{d_n, delta_n};
use crate::operators::{bernstein_op, error_profile_at, lorentz_q, tensor_grid, vertices};
use crate::oracle::{FunctionOracle, OrderModulus};
use crate::scalar::{Rational, Scalar};

/// Errors `|f - P|` over a point set, with the `2^d` vertices tracked separately.
#[derive(Clone, Debug, Serialize)]
pub struct ErrorProfile {
    pub points: Vec<Vec<f64>>,
    pub f_values: Vec<f64>,
    pub p_values: Vec<f64>,
    pub abs_errors: Vec<f64>,
    pub sup_error: f64,
    pub sup_location: Vec<f64>,
    pub vertex_errors: Vec<f64>,
}

impl ErrorProfile {
    pub fn new(points: Vec<Vec<f64>>, f_values: Vec<f64>, p_values: Vec<f64>, vertex_errors: Vec<f64>) -> Self {
        let abs_errors: Vec<f64> = f_values.iter().zip(&p_values).map(|(f, p)| (f - p).abs()).collect();
        let mut sup_error = vertex_errors.iter().copied().fold(0.0, f64::max);
        let mut sup_location = Vec::new();
        for (x, e) in points.iter().zip(&abs_errors) {
            if *e >= sup_error || sup_location.is_empty() && *e == sup_error {
                sup_error = *e;
                sup_location = x.clone();
            }
        }
        Self { points, f_values, p_values, abs_errors, sup_error, sup_location, vertex_errors }
    }

    pub fn vertex_max_error(&self) -> f64 {
        self.vertex_errors.iter().copied().fold(0.0, f64::max)
    }

    /// CSV with columns `x_1,...,x_d,f,P,abs_err`, full precision.
    pub fn to_csv(&self) -> String {
        let d = self.points.first().map_or(0, Vec::len);
        let mut out = String::new();
        for j in 1..=d {
            write!(out, "x_{j},").unwrap();
        }
        out.push_str("f,P,abs_err\n");
        for ((x, f), (p, e)) in self.points.iter().zip(&self.f_values).zip(self.p_values.iter().zip(&self.abs_errors)) {
            for v in x {
                write!(out, "{v},").unwrap();
            }
            writeln!(out, "{f},{p},{e}").unwrap();
        }
        out
    }
}

/// Right side of the bound for `B_n` when `r` is 0 or 1:
/// `(d+1) omega^(r)(max_j delta_{n_j}(x_j)) [sum_j delta_{n_j}(x_j)]^r`.
pub fn rhs_thm1_i(omega: &OrderModulus, n: &DegreeVector, x: &[f64], r: usize) -> Result<f64> {
    if r > 1 {
        return Err(domain!("the Bernstein-operator bound covers r = 0, 1 only"));
    }
    let deltas = deltas(n, x)?;
    let max = deltas.iter().copied().fold(0.0, f64::max);
    let sum: f64 = deltas.iter().sum();
    Ok((n.dim() + 1) as f64 * omega.at(max) * sum.powi(r as i32))
}

/// Right side of the corrected-operator bound for `r >= 2`:
/// `C omega^(r)(D_n(x)) D_n(x)^(r-2) [sum_j delta_{n_j}(x_j)]^2`.
pub fn rhs_thm1_ii(omega: &OrderModulus, n: &DegreeVector, x: &[f64], r: usize, constant: f64) -> Result<f64> {
    if r < 2 {
        return Err(domain!("the corrected-operator bound needs r >= 2"));
    }
    if constant <= 0.0 {
        return Err(domain!("constant must be positive"));
    }
    let big = d_n(n, x)?;
    let sum: f64 = deltas(n, x)?.iter().sum();
    Ok(constant * omega.at(big) * big.powi(r as i32 - 2) * sum * sum)
}

fn deltas(n: &DegreeVector, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != n.dim() {
        return Err(contract!("point has {} coordinates, expected {}", x.len(), n.dim()));
    }
    x.iter().zip(n.entries()).map(|(&t, &nj)| delta_n(nj, t)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Builder {
    Bernstein,
    Lorentz,
}

/// Which bound the observed errors are divided by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RhsKind {
    /// `(d+1) omega^(r)(max delta) (sum delta)^r`, r in {0, 1}.
    BernsteinBound,
    /// `omega^(r)(D) D^(r-2) (sum delta)^2`, r >= 2, unit constant.
    CorrectedBound,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyConfig {
    pub builder: Builder,
    pub r: usize,
    pub n_list: Vec<DegreeVector>,
    pub grid_step: f64,
    pub rhs: RhsKind,
    /// Violations are only reported against a declared constant.
    pub declared_constant: Option<f64>,
    /// Relative slack on the declared bound (covers modulus grid error).
    pub relative_slack: f64,
    /// Largest error tolerated where the right side vanishes.
    pub zero_tolerance: f64,
    /// Nominal modulus grid spacing; refined automatically for small `h`.
    pub modulus_step: Option<f64>,
    /// Seed for Monte Carlo points (d >= 3) and moduli.
    pub seed: u64,
}

impl VerifyConfig {
    /// The `r in {0,1}` bound for `B_n` with its explicit constant and 5% slack.
    pub fn bernstein(r: usize, n_list: Vec<DegreeVector>, grid_step: f64) -> Self {
        Self {
            builder: Builder::Bernstein,
            r,
            n_list,
            grid_step,
            rhs: RhsKind::BernsteinBound,
            declared_constant: Some(1.0),
            relative_slack: 0.05,
            zero_tolerance: 1e-12,
            modulus_step: None,
            seed: 0,
        }
    }

    /// The `r >= 2` bound for `Q_{n,r}`, with a fitted (undeclared) constant.
    pub fn lorentz(r: usize, n_list: Vec<DegreeVector>, grid_step: f64) -> Self {
        Self {
            builder: Builder::Lorentz,
            r,
            n_list,
            grid_step,
            rhs: RhsKind::CorrectedBound,
            declared_constant: None,
            relative_slack: 0.0,
            zero_tolerance: 1e-12,
            modulus_step: None,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundCase {
    pub n: Vec<usize>,
    pub x: Vec<f64>,
    pub observed: f64,
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseInfo {
    pub func: String,
    pub d: usize,
    pub n: Vec<Vec<usize>>,
    pub r: usize,
    pub builder: Builder,
    pub rhs: RhsKind,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeSummary {
    pub n: Vec<usize>,
    pub sup_error: f64,
    pub sup_location: Vec<f64>,
    pub fitted_constant: f64,
    pub vertex_max_err: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub case: CaseInfo,
    pub max_ratio: f64,
    /// `max observed / rhs` over every point with `rhs > 0`.
    pub fitted_constant: f64,
    pub vertex_max_err: f64,
    /// Largest error where the right side is zero.
    pub zero_rhs_max_err: f64,
    pub violations: Vec<BoundCase>,
    pub per_degree: Vec<DegreeSummary>,
    /// `max / min` of the per-degree fitted constants.
    pub fitted_variation: f64,
    pub modulus_step: f64,
    /// Whether the modulus grid was at most a quarter of the smallest queried `h`.
    pub modulus_resolution_ok: bool,
    pub seed: u64,
    #[serde(skip)]
    pub cases: Vec<BoundCase>,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Per-point CSV: `n_1..n_d,x_1..x_d,observed,rhs,ratio`.
    pub fn cases_csv(&self) -> String {
        let d = self.case.d;
        let mut out = String::new();
        for j in 1..=d {
            write!(out, "n_{j},").unwrap();
        }
        for j in 1..=d {
            write!(out, "x_{j},").unwrap();
        }
        out.push_str("observed,rhs,ratio\n");
        for c in &self.cases {
            for v in &c.n {
                write!(out, "{v},").unwrap();
            }
            for v in &c.x {
                write!(out, "{v},").unwrap();
            }
            writeln!(out, "{},{},{}", c.observed, c.rhs, c.ratio).unwrap();
        }
        out
    }
}

/// Monte Carlo point count for `d >= 3`.
pub const MONTE_CARLO_POINTS: usize = 10_000;

fn verification_points(d: usize, grid_step: f64, seed: u64) -> Result<Vec<Vec<f64>>> {
    if d <= 2 {
        return tensor_grid(d, grid_step);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: Vec<Vec<f64>> = (0..MONTE_CARLO_POINTS)
        .map(|_| (0..d).map(|_| rng.gen::<f64>()).collect())
        .collect();
    pts.extend(vertices(d));
    Ok(pts)
}

fn bound_argument(kind: RhsKind, n: &DegreeVector, x: &[f64]) -> Result<f64> {
    match kind {
        RhsKind::BernsteinBound => Ok(deltas(n, x)?.into_iter().fold(0.0, f64::max)),
        RhsKind::CorrectedBound => d_n(n, x),
    }
}

/// Nominal modulus grid spacing per dimension, and the finest allowed refinement.
fn modulus_steps(d: usize) -> (f64, f64) {
    match d {
        1 => (1e-3, 5e-5),
        2 => (1e-2, 2.5e-3),
        _ => (1e-3, 1e-4),
    }
}

/// Build `P` per degree, divide the observed error by the bound pointwise and
/// summarize. Points where the bound vanishes are checked against
/// `zero_tolerance` instead of entering the ratio statistics.
pub fn verify_bound(f: &FunctionOracle, cfg: &VerifyConfig) -> Result<BoundReport> {
    match (cfg.rhs, cfg.r) {
        (RhsKind::BernsteinBound, 0 | 1) => {}
        (RhsKind::CorrectedBound, r) if r >= 2 => {}
        (kind, r) => return Err(domain!("bound {kind:?} is incompatible with r = {r}")),
    }
    if cfg.n_list.is_empty() {
        return Err(domain!("no degrees to verify"));
    }
    let d = f.dim();
    let points = verification_points(d, cfg.grid_step, cfg.seed)?;

    let mut h_min = f64::INFINITY;
    let mut h_max = 0.0f64;
    for n in &cfg.n_list {
        for x in &points {
            let h = bound_argument(cfg.rhs, n, x)?;
            if h > 0.0 {
                h_min = h_min.min(h);
                h_max = h_max.max(h);
            }
        }
    }
    let (nominal, finest) = modulus_steps(d);
    let nominal = cfg.modulus_step.unwrap_or(nominal);
    let step = if h_min.is_finite() { nominal.min(h_min / 4.0).max(finest) } else { nominal };
    let omega = OrderModulus::build(f, cfg.r, step, h_max.max(step), cfg.seed)?;
    let modulus_resolution_ok = !h_min.is_finite() || omega.step() <= h_min / 4.0 + 1e-15;

    let per_degree: Vec<(DegreeSummary, Vec<BoundCase>, f64)> = cfg
        .n_list
        .par_iter()
        .map(|n| -> Result<_> {
            let p: TensorBernstein<f64> = match cfg.builder {
                Builder::Bernstein => bernstein_op(f, n)?,
                Builder::Lorentz => lorentz_q(f, n, cfg.r)?,
            };
            let profile = error_profile_at(f, &p, points.clone())?;
            let mut cases = Vec::with_capacity(points.len());
            let mut fitted = 0.0f64;
            let mut zero_max = 0.0f64;
            for (x, &observed) in profile.points.iter().zip(&profile.abs_errors) {
                let rhs = match cfg.rhs {
                    RhsKind::BernsteinBound => rhs_thm1_i(&omega, n, x, cfg.r)?,
                    RhsKind::CorrectedBound => rhs_thm1_ii(&omega, n, x, cfg.r, 1.0)?,
                };
                let ratio = if rhs > 0.0 { observed / rhs } else { f64::NAN };
                if rhs > 0.0 {
                    fitted = fitted.max(ratio);
                } else {
                    zero_max = zero_max.max(observed);
                }
                cases.push(BoundCase { n: n.entries().to_vec(), x: x.clone(), observed, rhs, ratio });
            }
            let summary = DegreeSummary {
                n: n.entries().to_vec(),
                sup_error: profile.sup_error,
                sup_location: profile.sup_location.clone(),
                fitted_constant: fitted,
                vertex_max_err: profile.vertex_max_error(),
            };
            Ok((summary, cases, zero_max))
        })
        .collect::<Result<_>>()?;

    let mut violations = Vec::new();
    let mut all_cases = Vec::new();
    let mut summaries = Vec::new();
    let mut zero_rhs_max_err = 0.0f64;
    for (summary, cases, zero_max) in per_degree {
        zero_rhs_max_err = zero_rhs_max_err.max(zero_max);
        for c in &cases {
            let bad = if c.rhs > 0.0 {
                cfg.declared_constant
                    .is_some_and(|k| c.observed > k * (1.0 + cfg.relative_slack) * c.rhs + cfg.zero_tolerance)
            } else {
                c.observed > cfg.zero_tolerance
            };
            if bad {
                violations.push(c.clone());
            }
        }
        all_cases.extend(cases);
        summaries.push(summary);
    }
    let fitted_constant = summaries.iter().map(|s| s.fitted_constant).fold(0.0, f64::max);
    let min_fitted = summaries.iter().map(|s| s.fitted_constant).fold(f64::INFINITY, f64::min);
    let vertex_max_err = summaries.iter().map(|s| s.vertex_max_err).fold(0.0, f64::max);
    Ok(BoundReport {
        case: CaseInfo {
            func: f.name().to_string(),
            d,
            n: cfg.n_list.iter().map(|n| n.entries().to_vec()).collect(),
            r: cfg.r,
            builder: cfg.builder,
            rhs: cfg.rhs,
        },
        max_ratio: fitted_constant,
        fitted_constant,
        vertex_max_err,
        zero_rhs_max_err,
        violations,
        per_degree: summaries,
        fitted_variation: fitted_constant / min_fitted,
        modulus_step: omega.step(),
        modulus_resolution_ok,
        seed: cfg.seed,
        cases: all_cases,
    })
}

/// Arithmetic used for coefficient assembly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Float,
    Exact,
}

impl std::str::FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "float" => Ok(Backend::Float),
            "exact" => Ok(Backend::Exact),
            other => Err(Error::Parse(format!("unknown backend `{other}` (float|exact)"))),
        }
    }
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::Float => "float",
            Backend::Exact => "exact",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PositivityStep {
    pub n: usize,
    pub min_coefficient: f64,
    pub argmin: MultiIndex,
    pub nonnegative: bool,
    /// Exact rational minimum, when computed in the exact backend.
    pub exact_min: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PositivityReport {
    pub func: String,
    pub r: usize,
    pub n_max: usize,
    pub backend: Backend,
    /// Smallest `n0` with nonnegative coefficients for every `n in [n0, n_max]`.
    pub threshold: Option<usize>,
    pub trace: Vec<PositivityStep>,
}

/// Scan `n = 1..=n_max` (the same degree on every axis) for the first `n0`
/// after which `Q_{n,r}^f` keeps nonnegative Bernstein coefficients.
pub fn positivity_scan(f: &FunctionOracle, r: usize, n_max: usize, backend: Backend) -> Result<PositivityReport> {
    if f.lower_bound_m() <= 0.0 {
        return Err(Error::Precondition(format!(
            "`{}` has lower bound m = {} but positivity needs m > 0",
            f.name(),
            f.lower_bound_m()
        )));
    }
    if n_max == 0 {
        return Err(domain!("n_max must be >= 1"));
    }
    let d = f.dim();
    let trace: Vec<PositivityStep> = (1..=n_max)
        .into_par_iter()
        .map(|n| -> Result<PositivityStep> {
            let degree = DegreeVector::uniform(d, n)?;
            Ok(match backend {
                Backend::Exact => {
                    let q: TensorBernstein<Rational> = lorentz_q(f, &degree, r)?;
                    let nonnegative = q.has_positive_coefficients();
                    let (min, argmin) = q.min_coefficient();
                    PositivityStep {
                        n,
                        min_coefficient: min.to_f64(),
                        argmin,
                        nonnegative,
                        exact_min: Some(min.to_string()),
                    }
                }
                Backend::Float => {
                    let q: TensorBernstein<f64> = lorentz_q(f, &degree, r)?;
                    let nonnegative = q.has_positive_coefficients();
                    let (min, argmin) = q.min_coefficient();
                    PositivityStep { n, min_coefficient: min, argmin, nonnegative, exact_min: None }
                }
            })
        })
        .collect::<Result<_>>()?;
    let threshold = match trace.iter().rposition(|s| !s.nonnegative) {
        None => Some(1),
        Some(last_bad) if last_bad + 1 < trace.len() => Some(trace[last_bad + 1].n),
        Some(_) => None,
    };
    Ok(PositivityReport { func: f.name().to_string(), r, n_max, backend, threshold, trace })
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityDemo {
    #[serde(skip)]
    pub density: TensorBernstein<f64>,
    /// Integral of the unnormalized `Q`; the density is `Q / normalization`.
    pub normalization: f64,
    /// Numerical integral of `f`.
    pub target_mass: f64,
    pub vertex_errors: Vec<f64>,
    pub interior_median_error: f64,
    pub interior_max_error: f64,
    /// Sup of `|f/mass(f) - density|` on the grid.
    pub density_sup_error: f64,
}

/// Composite Simpson rule on the unit cube with `panels` (even) per axis.
fn simpson_integral(f: &FunctionOracle, panels: usize) -> Result<f64> {
    let d = f.dim();
    let weights: Vec<f64> = (0..=panels)
        .map(|k| {
            let w = if k == 0 || k == panels { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
            w / (3.0 * panels as f64)
        })
        .collect();
    let grid = DegreeVector::uniform(d, panels)?;
    Ok(crate::combinatorics::Lattice::new(&grid)
        .map(|k| {
            let x: Vec<f64> = k.entries().iter().map(|&e| e as f64 / panels as f64).collect();
            let w: f64 = k.entries().iter().map(|&e| weights[e]).product();
            w * f.eval(&x)
        })
        .sum())
}

/// Normalize `Q_{n,r}^f` to unit mass, and compare errors at the vertices
/// with errors in the interior of the cube.
pub fn density_demo(f: &FunctionOracle, n: &DegreeVector, r: usize, grid_step: f64) -> Result<DensityDemo> {
    if f.lower_bound_m() <= 0.0 {
        return Err(Error::Precondition(format!("`{}` must be bounded below by m > 0", f.name())));
    }
    let q: TensorBernstein<f64> = lorentz_q(f, n, r)?;
    let normalization = q.integral();
    if !(normalization > 0.0) {
        return Err(contract!("approximant has nonpositive integral {normalization}"));
    }
    let density = q.scale(&(1.0 / normalization));
    let panels = match f.dim() {
        1 => 2000,
        2 => 200,
        _ => 20,
    };
    let target_mass = simpson_integral(f, panels)?;
    let points = tensor_grid(f.dim(), grid_step)?;
    let profile = error_profile_at(f, &q, points)?;
    let mut interior: Vec<f64> = profile
        .points
        .iter()
        .zip(&profile.abs_errors)
        .filter(|(x, _)| x.iter().all(|&t| t > 0.0 && t < 1.0))
        .map(|(_, &e)| e)
        .collect();
    interior.sort_by(f64::total_cmp);
    let interior_median_error = if interior.is_empty() { 0.0 } else { interior[interior.len() / 2] };
    let interior_max_error = interior.last().copied().unwrap_or(0.0);
    let density_sup_error = profile
        .points
        .iter()
        .map(|x| Ok((f.eval(x) / target_mass - density.eval(x)?).abs()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(DensityDemo {
        density,
        normalization,
        target_mass,
        vertex_errors: profile.vertex_errors,
        interior_median_error,
        interior_max_error,
        density_sup_error,
    })
}
