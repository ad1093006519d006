//! Target functions with closed-form partial derivatives, their class
//! metadata (lower bound `m`, derivative bounds `M_i`), and numerical
//! moduli of continuity.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combinatorics::{order_slice, DegreeVector, Lattice, MultiIndex};
use crate::error::{contract, domain, Error, Result};
use crate::scalar::{Rational, Scalar};

/// Highest derivative order supplied by the built-in registry.
pub const BUILTIN_MAX_ORDER: usize = 8;

/// Names accepted by [`builtin`].
pub const REGISTRY: &[&str] = &[
    "const_c",
    "affine",
    "quadratic_shifted",
    "parabola_shifted",
    "smooth_bump",
    "runge_shifted",
];

/// A function on the unit cube together with its partial derivatives.
pub trait Smooth: Send + Sync + Debug {
    /// `f^{(i)}(x)`.
    fn deriv(&self, i: &MultiIndex, x: &[f64]) -> f64;

    /// Exact value at a rational point, when the function admits one.
    fn deriv_exact(&self, _i: &MultiIndex, _x: &[Rational]) -> Option<Rational> {
        None
    }
}

/// A target function of class `Lambda_r(m, M)`: bounded below by `m`, with
/// derivative bounds `M_i` up to order `max_order`.
#[derive(Clone, Debug)]
pub struct FunctionOracle {
    name: String,
    dim: usize,
    max_order: usize,
    lower_bound_m: f64,
    deriv_bounds: BTreeMap<MultiIndex, f64>,
    inner: Arc<dyn Smooth>,
    scale: f64,
    shift: f64,
}

impl FunctionOracle {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        max_order: usize,
        lower_bound_m: f64,
        deriv_bounds: BTreeMap<MultiIndex, f64>,
        inner: Arc<dyn Smooth>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(domain!("dimension must be >= 1"));
        }
        Ok(Self {
            name: name.into(),
            dim,
            max_order,
            lower_bound_m,
            deriv_bounds,
            inner,
            scale: 1.0,
            shift: 0.0,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn lower_bound_m(&self) -> f64 {
        self.lower_bound_m
    }

    /// `M_i` for each multi-index of order `<= max_order`; `M_0` at the zero index.
    pub fn deriv_bounds(&self) -> &BTreeMap<MultiIndex, f64> {
        &self.deriv_bounds
    }

    /// Bound on `|f^{(i)}|`, if recorded.
    pub fn deriv_bound(&self, i: &MultiIndex) -> Option<f64> {
        self.deriv_bounds.get(i).copied()
    }

    /// `c f + b` with `c > 0`.
    pub fn with_transform(&self, scale: f64, shift: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite() && shift.is_finite()) {
            return Err(domain!("transform needs finite scale > 0, got scale={scale} shift={shift}"));
        }
        let mut out = self.clone();
        out.scale = self.scale * scale;
        out.shift = self.shift * scale + shift;
        out.lower_bound_m = self.lower_bound_m * scale + shift;
        out.deriv_bounds = self
            .deriv_bounds
            .iter()
            .map(|(i, m)| (i.clone(), if i.is_zero() { m * scale + shift.abs() } else { m * scale }))
            .collect();
        if scale != 1.0 || shift != 0.0 {
            out.name = format!("{}*{scale}{shift:+}", self.name);
        }
        Ok(out)
    }

    fn check(&self, i: &MultiIndex, len: usize) -> Result<()> {
        if i.dim() != self.dim || len != self.dim {
            return Err(contract!("oracle has dimension {}", self.dim));
        }
        if i.order() > self.max_order {
            return Err(domain!(
                "derivative of order {} requested from `{}` (max order {})",
                i.order(),
                self.name,
                self.max_order
            ));
        }
        Ok(())
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.inner.deriv(&MultiIndex::zeros(self.dim), x) * self.scale + self.shift
    }

    /// `f^{(i)}(x)`.
    pub fn deriv(&self, i: &MultiIndex, x: &[f64]) -> Result<f64> {
        self.check(i, x.len())?;
        let v = self.inner.deriv(i, x) * self.scale;
        Ok(if i.is_zero() { v + self.shift } else { v })
    }

    /// Exact `f^{(i)}(x)` when the underlying function supports it.
    pub fn deriv_exact(&self, i: &MultiIndex, x: &[Rational]) -> Result<Option<Rational>> {
        self.check(i, x.len())?;
        Ok(self.inner.deriv_exact(i, x).map(|v| {
            let v = v * Rational::from_f64(self.scale);
            if i.is_zero() {
                v + Rational::from_f64(self.shift)
            } else {
                v
            }
        }))
    }

    /// `f^{(i)}(k/n)` in the requested backend. The exact backend uses the
    /// exact value when available and otherwise the float value, converted exactly.
    pub fn sample<T: Scalar>(&self, i: &MultiIndex, k: &MultiIndex, n: &DegreeVector) -> Result<T> {
        if T::EXACT {
            let point: Vec<Rational> = (0..n.dim())
                .map(|j| Rational::new(BigInt::from(k[j]), BigInt::from(n[j])))
                .collect();
            if let Some(v) = self.deriv_exact(i, &point)? {
                return Ok(T::from_rational(&v));
            }
        }
        let point: Vec<f64> = (0..n.dim()).map(|j| k[j] as f64 / n[j] as f64).collect();
        Ok(T::from_f64(self.deriv(i, &point)?))
    }

    /// Smallest value of `f` found on a 101^d grid (d <= 2) or 10^4 seeded
    /// random points (d >= 3). Grid values are exact, rounded once, when the
    /// function supports exact evaluation.
    pub fn grid_minimum(&self, seed: u64) -> f64 {
        if self.dim <= 2 {
            let n = DegreeVector::uniform(self.dim, 100).expect("dim >= 1");
            let zero = MultiIndex::zeros(self.dim);
            Lattice::new(&n)
                .map(|k| match self.sample::<Rational>(&zero, &k, &n) {
                    Ok(v) => v.to_f64(),
                    Err(_) => f64::NAN,
                })
                .fold(f64::INFINITY, f64::min)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..10_000)
                .map(|_| self.eval(&(0..self.dim).map(|_| rng.gen::<f64>()).collect::<Vec<_>>()))
                .fold(f64::INFINITY, f64::min)
        }
    }

    /// Whether the recorded lower bound holds on the validation points.
    pub fn validate_lower_bound(&self, seed: u64) -> bool {
        self.grid_minimum(seed) >= self.lower_bound_m
    }
}

/// Multivariate polynomial `sum c_e x^e` with exact rational coefficients.
#[derive(Debug, Clone)]
pub struct Polynomial {
    dim: usize,
    terms: Vec<(MultiIndex, Rational)>,
    terms_f64: Vec<(MultiIndex, f64)>,
}

impl Polynomial {
    pub fn new(dim: usize, terms: Vec<(MultiIndex, Rational)>) -> Result<Self> {
        if let Some((e, _)) = terms.iter().find(|(e, _)| e.dim() != dim) {
            return Err(contract!("exponent {e} does not have {dim} entries"));
        }
        let mut merged: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
        for (e, c) in terms {
            *merged.entry(e).or_insert_with(Rational::zero) += c;
        }
        let mut terms: Vec<_> = merged.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        // constant last: small offsets like 1/20 survive float summation
        terms.sort_by_key(|(e, _)| std::cmp::Reverse(e.order()));
        let terms_f64 = terms.iter().map(|(e, c)| (e.clone(), c.to_f64())).collect();
        Ok(Self { dim, terms, terms_f64 })
    }

    /// `constant + sum_j p_j(x_j)`, with `axes[j]` the monomial coefficients of `p_j`.
    pub fn additive(constant: Rational, axes: Vec<Vec<Rational>>) -> Self {
        let dim = axes.len();
        let mut terms = vec![(MultiIndex::zeros(dim), constant)];
        for (j, p) in axes.into_iter().enumerate() {
            for (k, c) in p.into_iter().enumerate() {
                let mut e = vec![0; dim];
                e[j] = k;
                terms.push((MultiIndex::new(e), c));
            }
        }
        Self::new(dim, terms).expect("dimensions agree")
    }

    fn falling(e: &MultiIndex, i: &MultiIndex) -> Option<usize> {
        if !i.le(e) {
            return None;
        }
        Some((0..e.dim()).map(|j| (e[j] - i[j] + 1..=e[j]).product::<usize>()).product())
    }

    fn value<T: Scalar>(terms: &[(MultiIndex, T)], i: &MultiIndex, x: &[T]) -> T {
        terms.iter().fold(T::zero(), |acc, (e, c)| match Self::falling(e, i) {
            None => acc,
            Some(f) => {
                let mono = (0..e.dim()).fold(T::from_usize(f), |m, j| {
                    (0..e[j] - i[j]).fold(m, |m, _| m * x[j].clone())
                });
                acc + c.clone() * mono
            }
        })
    }

    /// `sup |f^{(i)}|` over the cube for every `i` up to [`BUILTIN_MAX_ORDER`],
    /// bounded by coefficient magnitudes.
    pub fn bounds(&self) -> BTreeMap<MultiIndex, f64> {
        all_indices(self.dim, BUILTIN_MAX_ORDER)
            .map(|i| {
                let b = self
                    .terms_f64
                    .iter()
                    .filter_map(|(e, c)| Self::falling(e, &i).map(|f| c.abs() * f as f64))
                    .sum();
                (i, b)
            })
            .collect()
    }
}

impl Smooth for Polynomial {
    fn deriv(&self, i: &MultiIndex, x: &[f64]) -> f64 {
        Self::value(&self.terms_f64, i, x)
    }

    fn deriv_exact(&self, i: &MultiIndex, x: &[Rational]) -> Option<Rational> {
        Some(Self::value(&self.terms, i, x))
    }
}

impl FunctionOracle {
    /// A polynomial target; `m` is the caller's lower bound.
    pub fn polynomial(name: impl Into<String>, poly: Polynomial, m: f64) -> Result<Self> {
        let bounds = poly.bounds();
        Self::new(name, poly.dim, BUILTIN_MAX_ORDER, m, bounds, Arc::new(poly))
    }

    /// `constant + sum_j p_j(x_j)`; see [`Polynomial::additive`].
    pub fn additive_polynomial(
        name: impl Into<String>,
        constant: Rational,
        axes: Vec<Vec<Rational>>,
        m: f64,
    ) -> Result<Self> {
        Self::polynomial(name, Polynomial::additive(constant, axes), m)
    }
}

/// Univariate factor with closed-form derivatives of every order.
#[derive(Debug, Clone, Copy)]
pub enum Factor {
    /// `(1 + cos(freq (t - center))) / 2`.
    RaisedCosine { freq: f64, center: f64 },
    /// `1 / (1 + a (t - 1/2)^2)`.
    Runge { a: f64 },
}

impl Factor {
    pub fn deriv(&self, k: usize, t: f64) -> f64 {
        match *self {
            Factor::RaisedCosine { freq, center } => {
                let phase = freq * (t - center) + k as f64 * std::f64::consts::FRAC_PI_2;
                let v = 0.5 * freq.powi(k as i32) * phase.cos();
                if k == 0 {
                    0.5 + v
                } else {
                    v
                }
            }
            Factor::Runge { a } => {
                // 1/(1 + c^2 y^2) = Re 1/(1 + i c y); differentiate the simple pole.
                let c = a.sqrt();
                let y = t - 0.5;
                let ic = Complex64::new(0.0, c);
                let pole = (Complex64::one() + ic * y).powi(-(k as i32 + 1));
                let fact: f64 = (1..=k).map(|j| j as f64).product();
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                (sign * fact * ic.powi(k as i32) * pole).re
            }
        }
    }

    /// Upper bound of `|d^k/dt^k|` over [0, 1].
    pub fn bound(&self, k: usize) -> f64 {
        match *self {
            Factor::RaisedCosine { freq, .. } => {
                if k == 0 {
                    1.0
                } else {
                    0.5 * freq.powi(k as i32)
                }
            }
            Factor::Runge { a } => {
                let fact: f64 = (1..=k).map(|j| j as f64).product();
                fact * a.sqrt().powi(k as i32)
            }
        }
    }
}

/// `prod_j g(x_j)` for a single univariate factor `g`.
#[derive(Debug, Clone)]
pub struct ProductFunction {
    factor: Factor,
}

impl ProductFunction {
    pub fn new(factor: Factor) -> Self {
        Self { factor }
    }
}

impl Smooth for ProductFunction {
    fn deriv(&self, i: &MultiIndex, x: &[f64]) -> f64 {
        (0..i.dim()).map(|j| self.factor.deriv(i[j], x[j])).product()
    }
}

fn all_indices(dim: usize, max_order: usize) -> impl Iterator<Item = MultiIndex> {
    (0..=max_order).flat_map(move |r| order_slice(dim, r))
}

/// Smooth bump factor; its peak sits off-centre so the third derivative does
/// not vanish at the endpoints.
pub const SMOOTH_BUMP_FACTOR: Factor = Factor::RaisedCosine {
    freq: 2.0 * std::f64::consts::PI,
    center: 0.3,
};
pub const SMOOTH_BUMP_SHIFT: f64 = 0.5;
pub const RUNGE_A: f64 = 25.0;
pub const RUNGE_SHIFT: f64 = 0.1;
pub const PARABOLA_SHIFT: f64 = 0.05;

/// Look up a registry function in dimension `d`.
///
/// | name | definition | m |
/// |---|---|---|
/// | `const_c` | `1` | 1 |
/// | `affine` | `1 + sum_j (1/2 + j/4) x_j` | 1 |
/// | `quadratic_shifted` | `1 + sum_j x_j (1 - x_j)` | 1 |
/// | `parabola_shifted` | `1/20 + sum_j (x_j - 1/2)^2` | 1/20 |
/// | `smooth_bump` | `1/2 + prod_j (1 + cos(2 pi (x_j - 0.3)))/2` | 1/2 |
/// | `runge_shifted` | `1/10 + prod_j 1/(1 + 25 (x_j - 1/2)^2)` | `1/10 + 7.25^-d` |
///
/// Scaled or shifted variants come from [`FunctionOracle::with_transform`].
pub fn builtin(name: &str, d: usize) -> Result<FunctionOracle> {
    if d == 0 {
        return Err(domain!("dimension must be >= 1"));
    }
    let q = |num: i64, den: i64| crate::scalar::ratio(num, den);
    let additive = |constant: Rational, axes: Vec<Vec<Rational>>| {
        let poly = Polynomial::additive(constant, axes);
        let bounds = poly.bounds();
        (Arc::new(poly) as Arc<dyn Smooth>, bounds)
    };
    let (inner, bounds, m): (Arc<dyn Smooth>, BTreeMap<MultiIndex, f64>, f64) = match name {
        "const_c" => {
            let (inner, b) = additive(Rational::one(), vec![vec![]; d]);
            (inner, b, 1.0)
        }
        "affine" => {
            let axes = (0..d).map(|j| vec![Rational::zero(), q(2 + j as i64, 4)]).collect();
            let (inner, b) = additive(Rational::one(), axes);
            (inner, b, 1.0)
        }
        "quadratic_shifted" => {
            let axes = vec![vec![Rational::zero(), Rational::one(), -Rational::one()]; d];
            let (inner, b) = additive(Rational::one(), axes);
            (inner, b, 1.0)
        }
        "parabola_shifted" => {
            // (x - 1/2)^2 = 1/4 - x + x^2
            let axes = vec![vec![q(1, 4), -Rational::one(), Rational::one()]; d];
            let (inner, b) = additive(q(1, 20), axes);
            (inner, b, PARABOLA_SHIFT)
        }
        "smooth_bump" | "runge_shifted" => {
            let (factor, shift, m) = if name == "smooth_bump" {
                (SMOOTH_BUMP_FACTOR, SMOOTH_BUMP_SHIFT, SMOOTH_BUMP_SHIFT)
            } else {
                let corner = 1.0 / (1.0 + RUNGE_A * 0.25);
                (Factor::Runge { a: RUNGE_A }, RUNGE_SHIFT, RUNGE_SHIFT + corner.powi(d as i32))
            };
            let bounds = all_indices(d, BUILTIN_MAX_ORDER)
                .map(|i| {
                    let b: f64 = (0..d).map(|j| factor.bound(i[j])).product();
                    (i, b)
                })
                .collect();
            let base = FunctionOracle::new(
                name,
                d,
                BUILTIN_MAX_ORDER,
                m - shift,
                bounds,
                Arc::new(ProductFunction::new(factor)),
            )?;
            let mut out = base.with_transform(1.0, shift)?;
            out.name = name.to_string();
            return Ok(out);
        }
        other => return Err(Error::UnknownFunction(other.to_string())),
    };
    FunctionOracle::new(name, d, BUILTIN_MAX_ORDER, m, bounds, inner)
}

/// `omega(f, h)` estimated on a grid with spacing `grid_step`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModulusEstimate {
    pub h: f64,
    pub value: f64,
    pub grid_step: f64,
}

/// Cumulative oscillation of a function by taxicab distance, for cheap
/// repeated queries of `omega(f, h)` with `h <= h_max`.
///
/// Pairs at distance `L` are binned at level `ceil(L / step)`, so `at(h)`
/// only counts pairs within the closed ball of radius `h`.
#[derive(Clone, Debug)]
pub struct ModulusProfile {
    step: f64,
    levels: Vec<f64>,
}

/// Number of random pairs used for `d >= 3`.
pub const MONTE_CARLO_PAIRS: usize = 1_000_000;

impl ModulusProfile {
    pub fn build(
        f: &(dyn Fn(&[f64]) -> f64 + Sync),
        d: usize,
        grid_step: f64,
        h_max: f64,
        seed: u64,
    ) -> Result<Self> {
        if !(grid_step > 0.0 && grid_step <= 1.0) || !(h_max > 0.0) {
            return Err(domain!("need 0 < grid_step <= 1 and h_max > 0"));
        }
        let cells = (1.0 / grid_step).ceil() as usize;
        let step = 1.0 / cells as f64;
        let max_level = ((h_max / step) + 1e-9).ceil() as usize;
        let mut levels = match d {
            0 => return Err(domain!("dimension must be >= 1")),
            1 => {
                let values: Vec<f64> = (0..=cells).map(|k| f(&[k as f64 * step])).collect();
                let top = max_level.min(cells);
                let mut levels = vec![0.0; top + 1];
                for (l, slot) in levels.iter_mut().enumerate().skip(1) {
                    *slot = values
                        .iter()
                        .zip(&values[l..])
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max);
                }
                levels
            }
            2 => {
                let n = cells + 1;
                let values: Vec<f64> = (0..n * n)
                    .map(|p| f(&[(p / n) as f64 * step, (p % n) as f64 * step]))
                    .collect();
                let top = max_level.min(2 * cells);
                let mut levels = vec![0.0f64; top + 1];
                let reach = top.min(cells) as isize;
                for a in 0..=reach {
                    for b in -reach..=reach {
                        if (a == 0 && b <= 0) || (a + b.abs()) as usize > top {
                            continue;
                        }
                        let level = (a + b.abs()) as usize;
                        let mut best = 0.0f64;
                        for i in 0..n as isize - a {
                            for j in 0.max(-b)..(n as isize).min(n as isize - b) {
                                let p = (i * n as isize + j) as usize;
                                let q = ((i + a) * n as isize + j + b) as usize;
                                best = best.max((values[p] - values[q]).abs());
                            }
                        }
                        levels[level] = levels[level].max(best);
                    }
                }
                levels
            }
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut levels = vec![0.0f64; max_level + 1];
                let mut s = vec![0.0; d];
                let mut t = vec![0.0; d];
                let mut w = vec![0.0; d];
                for _ in 0..MONTE_CARLO_PAIRS {
                    s.iter_mut().for_each(|v| *v = rng.gen::<f64>());
                    let len = rng.gen::<f64>() * h_max;
                    // uniform direction on the taxicab sphere
                    w.iter_mut().for_each(|v| *v = -rng.gen::<f64>().max(1e-300).ln());
                    let total: f64 = w.iter().sum();
                    let mut inside = true;
                    for j in 0..d {
                        let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                        t[j] = s[j] + sign * len * w[j] / total;
                        inside &= (0.0..=1.0).contains(&t[j]);
                    }
                    if !inside {
                        continue;
                    }
                    let level = ((len / step).ceil() as usize).min(max_level);
                    levels[level] = levels[level].max((f(&s) - f(&t)).abs());
                }
                levels
            }
        };
        for l in 1..levels.len() {
            levels[l] = levels[l].max(levels[l - 1]);
        }
        Ok(Self { step, levels })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Estimated `omega(h)`; `h` beyond the built range saturates.
    pub fn at(&self, h: f64) -> f64 {
        if h <= 0.0 {
            return 0.0;
        }
        let level = ((h / self.step) + 1e-9).floor() as usize;
        self.levels[level.min(self.levels.len() - 1)]
    }
}

/// `omega(f, h) = max_{|s-t| <= h} |f(s) - f(t)|` over a grid of spacing `grid_step`.
pub fn modulus(
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    d: usize,
    h: f64,
    grid_step: f64,
) -> Result<ModulusEstimate> {
    if !(h > 0.0) {
        return Err(domain!("h must be positive"));
    }
    if grid_step > h / 4.0 {
        return Err(contract!("grid step {grid_step} too coarse for h = {h}; need <= h/4"));
    }
    let profile = ModulusProfile::build(f, d, grid_step, h, 0)?;
    Ok(ModulusEstimate { h, value: profile.at(h), grid_step: profile.step() })
}

/// `omega^{(r)}(h) = max_{<i> = r} omega(f^{(i)}, h)`.
pub fn modulus_order_r(f: &FunctionOracle, r: usize, h: f64, grid_step: f64) -> Result<f64> {
    if r > f.max_order() {
        return Err(domain!("order {r} exceeds available derivatives ({})", f.max_order()));
    }
    order_slice(f.dim(), r).into_iter().try_fold(0.0f64, |acc, i| {
        let g = |x: &[f64]| f.deriv(&i, x).expect("order checked");
        Ok(acc.max(modulus(&g, f.dim(), h, grid_step)?.value))
    })
}

/// Profiles of every order-`r` partial derivative, queried as their maximum.
#[derive(Clone, Debug)]
pub struct OrderModulus {
    r: usize,
    profiles: Vec<ModulusProfile>,
}

impl OrderModulus {
    pub fn build(f: &FunctionOracle, r: usize, grid_step: f64, h_max: f64, seed: u64) -> Result<Self> {
        if r > f.max_order() {
            return Err(domain!("order {r} exceeds available derivatives ({})", f.max_order()));
        }
        let profiles = order_slice(f.dim(), r)
            .into_iter()
            .map(|i| {
                let g = |x: &[f64]| f.deriv(&i, x).expect("order checked");
                ModulusProfile::build(&g, f.dim(), grid_step, h_max, seed)
            })
            .collect::<Result<_>>()?;
        Ok(Self { r, profiles })
    }

    pub fn order(&self) -> usize {
        self.r
    }

    pub fn step(&self) -> f64 {
        self.profiles[0].step()
    }

    pub fn at(&self, h: f64) -> f64 {
        self.profiles.iter().map(|p| p.at(h)).fold(0.0, f64::max)
    }
}

/// Step of the central differences used by [`fd_check`].
pub const FD_STEP: f64 = 1e-4;

#[derive(Clone, Debug, Serialize)]
pub struct FdReport {
    pub func: String,
    pub samples: usize,
    pub seed: u64,
    /// `|fd - exact| / max(|exact|, M_i, 1)` maximized over indices and points.
    pub max_rel_error: f64,
    pub worst_index: Option<MultiIndex>,
    pub worst_point: Vec<f64>,
}

/// Compare every derivative of order `1..=max_order` with a central difference
/// of the next-lower derivative at seeded random interior points.
pub fn fd_check(f: &FunctionOracle, samples: usize, seed: u64) -> FdReport {
    let d = f.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<f64>> = (0..samples)
        .map(|_| (0..d).map(|_| rng.gen_range(0.05..0.95)).collect())
        .collect();
    let mut report = FdReport {
        func: f.name().to_string(),
        samples,
        seed,
        max_rel_error: 0.0,
        worst_index: None,
        worst_point: Vec::new(),
    };
    for i in (1..=f.max_order()).flat_map(|r| order_slice(d, r)) {
        let axis = (0..d).find(|&j| i[j] > 0).expect("order >= 1");
        let lower = i.decrement(axis).expect("entry positive");
        let scale = f.deriv_bound(&i).unwrap_or(0.0).max(1.0);
        for x in &points {
            let mut hi = x.clone();
            let mut lo = x.clone();
            hi[axis] += FD_STEP;
            lo[axis] -= FD_STEP;
            let fd = (f.deriv(&lower, &hi).unwrap() - f.deriv(&lower, &lo).unwrap()) / (2.0 * FD_STEP);
            let exact = f.deriv(&i, x).unwrap();
            let rel = (fd - exact).abs() / scale.max(exact.abs());
            if rel > report.max_rel_error || rel.is_nan() {
                report.max_rel_error = rel;
                report.worst_index = Some(i.clone());
                report.worst_point = x.clone();
            }
        }
    }
    report
}
