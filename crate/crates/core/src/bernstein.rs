//! Bernstein basis evaluation and polynomial algebra in Bernstein form.
//!
//! Univariate polynomials are [`BernsteinPoly1D`]; d-variate tensor-product
//! polynomials are [`TensorBernstein`], whose coefficients are stored in the
//! row-major order of [`crate::combinatorics::lattice`]. Every tensor operation
//! acts one axis at a time.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};

use crate::combinatorics::{binomial_row, DegreeVector, Lattice, MultiIndex};
use crate::error::{contract, domain, Error, Result};
use crate::scalar::{Rational, Scalar};

/// Coefficients at or above this value count as nonnegative in the float backend.
pub const POSITIVITY_TOLERANCE: f64 = -1e-12;

/// Degrees up to this use direct powers; above it the basis is evaluated in log space.
const DIRECT_EVAL_MAX_DEGREE: usize = 50;

fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(domain!("point {x} lies outside [0, 1]"))
    }
}

fn check_unit_generic<T: Scalar>(x: &T) -> Result<()> {
    if *x < T::zero() || *x > T::one() {
        Err(domain!("point {} lies outside [0, 1]", x.to_f64()))
    } else {
        Ok(())
    }
}

/// `p_{nk}(x) = C(n,k) x^k (1-x)^(n-k)`.
pub fn basis_eval(n: usize, k: usize, x: f64) -> Result<f64> {
    if k > n {
        return Err(domain!("basis index {k} exceeds degree {n}"));
    }
    check_unit(x)?;
    if n <= DIRECT_EVAL_MAX_DEGREE {
        let c = binomial_f64(n, k);
        return Ok(c * x.powi(k as i32) * (1.0 - x).powi((n - k) as i32));
    }
    if x == 0.0 {
        return Ok(if k == 0 { 1.0 } else { 0.0 });
    }
    if x == 1.0 {
        return Ok(if k == n { 1.0 } else { 0.0 });
    }
    let ln_c: f64 = (0..k).map(|j| ((n - j) as f64 / (j + 1) as f64).ln()).sum();
    Ok((ln_c + k as f64 * x.ln() + (n - k) as f64 * (-x).ln_1p()).exp())
}

/// All of `p_{n0}(x), ..., p_{nn}(x)` at once.
pub fn basis_row(n: usize, x: f64) -> Result<Vec<f64>> {
    check_unit(x)?;
    if x == 0.0 || x == 1.0 {
        let mut row = vec![0.0; n + 1];
        row[if x == 0.0 { 0 } else { n }] = 1.0;
        return Ok(row);
    }
    if n <= DIRECT_EVAL_MAX_DEGREE {
        let mut c = 1.0;
        return Ok((0..=n)
            .map(|k| {
                let v = c * x.powi(k as i32) * (1.0 - x).powi((n - k) as i32);
                c = c * (n - k) as f64 / (k + 1) as f64;
                v
            })
            .collect());
    }
    let (lx, l1x) = (x.ln(), (-x).ln_1p());
    let mut ln_c = 0.0;
    Ok((0..=n)
        .map(|k| {
            let v = (ln_c + k as f64 * lx + (n - k) as f64 * l1x).exp();
            if k < n {
                ln_c += ((n - k) as f64 / (k + 1) as f64).ln();
            }
            v
        })
        .collect())
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `prod_j p_{n_j i_j}(x_j)`.
pub fn tensor_basis_eval(n: &DegreeVector, i: &MultiIndex, x: &[f64]) -> Result<f64> {
    if i.dim() != n.dim() || x.len() != n.dim() {
        return Err(contract!(
            "dimension mismatch: degree {}, index {}, point {}",
            n.dim(),
            i.dim(),
            x.len()
        ));
    }
    (0..n.dim()).try_fold(1.0, |acc, j| Ok(acc * basis_eval(n[j], i[j], x[j])?))
}

fn de_casteljau<T: Scalar>(coeffs: &[T], x: &T) -> T {
    let mut beta = coeffs.to_vec();
    let one_minus = T::one() - x.clone();
    // interpolate from the nearer end: exact at 0 and 1 and on constants
    let from_left = T::EXACT || *x <= T::from_ratio(&1.into(), &2.into());
    for level in 1..beta.len() {
        for k in 0..beta.len() - level {
            let (a, b) = (beta[k].clone(), beta[k + 1].clone());
            beta[k] = if from_left {
                a.clone() + (b - a) * x.clone()
            } else {
                b.clone() + (a - b) * one_minus.clone()
            };
        }
    }
    beta.swap_remove(0)
}

/// A sparse linear map from fibers of one length to fibers of another.
struct FiberMap<T> {
    rows: Vec<Vec<(usize, T)>>,
}

impl<T: Scalar> FiberMap<T> {
    /// Degree elevation `from -> to`.
    fn elevation(from: usize, to: usize) -> Self {
        let r = to - from;
        let (cf, cr, ct) = (binomial_row(from), binomial_row(r), binomial_row(to));
        let rows = (0..=to)
            .map(|k| {
                (k.saturating_sub(r)..=from.min(k))
                    .map(|j| {
                        let num = BigInt::from(&cf[j] * &cr[k - j]);
                        (j, T::from_ratio(&num, &BigInt::from(ct[k].clone())))
                    })
                    .collect()
            })
            .collect();
        Self { rows }
    }

    /// Multiplication of a degree-`from` fiber by the fixed polynomial `q`.
    fn product(from: usize, q: &[T]) -> Self {
        let b = q.len() - 1;
        let to = from + b;
        let (ca, cb, ct): (Vec<BigUint>, Vec<BigUint>, Vec<BigUint>) =
            (binomial_row(from), binomial_row(b), binomial_row(to));
        let rows = (0..=to)
            .map(|k| {
                (k.saturating_sub(from)..=b.min(k))
                    .map(|l| {
                        let j = k - l;
                        let num = BigInt::from(&ca[j] * &cb[l]);
                        let w = T::from_ratio(&num, &BigInt::from(ct[k].clone()));
                        (j, w * q[l].clone())
                    })
                    .collect()
            })
            .collect();
        Self { rows }
    }

    fn out_len(&self) -> usize {
        self.rows.len()
    }

    fn apply(&self, fiber: &[T]) -> Vec<T> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .fold(T::zero(), |acc, (j, w)| acc + w.clone() * fiber[*j].clone())
            })
            .collect()
    }
}

/// A univariate polynomial `sum_k b_k p_{nk}(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BernsteinPoly1D<T = f64> {
    coeffs: Vec<T>,
}

impl<T: Scalar> BernsteinPoly1D<T> {
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(contract!("a Bernstein polynomial needs at least one coefficient"));
        }
        Ok(Self { coeffs })
    }

    pub fn constant(c: T, degree: usize) -> Self {
        Self { coeffs: vec![c; degree + 1] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn eval(&self, x: &T) -> Result<T> {
        check_unit_generic(x)?;
        Ok(de_casteljau(&self.coeffs, x))
    }

    pub fn degree_elevate(&self, m: usize) -> Result<Self> {
        let n = self.degree();
        if m < n {
            return Err(domain!("cannot elevate degree {n} down to {m}"));
        }
        if m == n {
            return Ok(self.clone());
        }
        Ok(Self { coeffs: FiberMap::elevation(n, m).apply(&self.coeffs) })
    }

    pub fn multiply(&self, other: &Self) -> Self {
        // the map is built over the shorter operand
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        Self { coeffs: FiberMap::product(long.degree(), &short.coeffs).apply(&long.coeffs) }
    }

    /// Convert monomial coefficients `a_0 + a_1 x + ...` at the minimal degree.
    pub fn from_monomial(mono: &[T]) -> Self {
        let m = mono.len().saturating_sub(1);
        Self::from_monomial_with_degree(mono, m).expect("degree matches length")
    }

    /// Convert monomial coefficients into the degree-`m` Bernstein basis.
    ///
    /// Uses `x^j = sum_{k>=j} [C(k,j)/C(m,j)] p_{mk}(x)`.
    pub fn from_monomial_with_degree(mono: &[T], m: usize) -> Result<Self> {
        if mono.is_empty() {
            return Ok(Self::constant(T::zero(), m));
        }
        if mono.len() > m + 1 {
            return Err(domain!("monomial degree {} exceeds target degree {m}", mono.len() - 1));
        }
        if !T::EXACT {
            // the change of basis is ill-conditioned; round once at the end
            let exact: Vec<Rational> = mono.iter().map(|c| Rational::from_f64(c.to_f64())).collect();
            let b = BernsteinPoly1D::<Rational>::from_monomial_with_degree(&exact, m)?;
            return Ok(Self { coeffs: b.coeffs.iter().map(T::from_rational).collect() });
        }
        let cm = binomial_row(m);
        let rows: Vec<Vec<BigUint>> = (0..=m).map(binomial_row).collect();
        let coeffs = (0..=m)
            .map(|k| {
                (0..=k.min(mono.len() - 1)).fold(T::zero(), |acc, j| {
                    let w = T::from_ratio(
                        &BigInt::from(rows[k][j].clone()),
                        &BigInt::from(cm[j].clone()),
                    );
                    acc + w * mono[j].clone()
                })
            })
            .collect();
        Ok(Self { coeffs })
    }

    /// Monomial coefficients `a_j = C(m,j) sum_{k<=j} (-1)^(j-k) C(j,k) b_k`.
    pub fn to_monomial(&self) -> Vec<T> {
        if !T::EXACT {
            let exact: Vec<Rational> = self.coeffs.iter().map(|c| Rational::from_f64(c.to_f64())).collect();
            return BernsteinPoly1D { coeffs: exact }.to_monomial().iter().map(T::from_rational).collect();
        }
        let m = self.degree();
        let cm = binomial_row(m);
        (0..=m)
            .map(|j| {
                let cj = binomial_row(j);
                let inner = (0..=j).fold(T::zero(), |acc, k| {
                    let term = T::from_ratio(&BigInt::from(cj[k].clone()), &BigInt::from(1))
                        * self.coeffs[k].clone();
                    if (j - k) % 2 == 0 {
                        acc + term
                    } else {
                        acc - term
                    }
                });
                T::from_ratio(&BigInt::from(cm[j].clone()), &BigInt::from(1)) * inner
            })
            .collect()
    }

    /// Sum after elevating both operands to the larger degree.
    pub fn add(&self, other: &Self) -> Self {
        let m = self.degree().max(other.degree());
        let (a, b) = (self.degree_elevate(m).unwrap(), other.degree_elevate(m).unwrap());
        Self {
            coeffs: a.coeffs.into_iter().zip(b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        Self { coeffs: self.coeffs.iter().map(|b| b.clone() * c.clone()).collect() }
    }

    pub fn min_coefficient(&self) -> (T, usize) {
        min_with_index(&self.coeffs)
    }

    pub fn integral(&self) -> T {
        mean(&self.coeffs)
    }
}

fn min_with_index<T: Scalar>(values: &[T]) -> (T, usize) {
    let mut best = 0;
    for (k, v) in values.iter().enumerate().skip(1) {
        if *v < values[best] {
            best = k;
        }
    }
    (values[best].clone(), best)
}

fn mean<T: Scalar>(values: &[T]) -> T {
    let sum = values.iter().cloned().fold(T::zero(), |a, b| a + b);
    sum / T::from_usize(values.len())
}

/// A d-variate tensor-product polynomial `sum_i a(i) p_{n,i}(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorBernstein<T = f64> {
    degree: DegreeVector,
    coeffs: Vec<T>,
}

impl<T: Scalar> TensorBernstein<T> {
    pub fn new(degree: DegreeVector, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != degree.lattice_len() {
            return Err(contract!(
                "degree {degree} needs {} coefficients, got {}",
                degree.lattice_len(),
                coeffs.len()
            ));
        }
        Ok(Self { degree, coeffs })
    }

    /// Coefficients `a(i) = coeff(i)` over the lattice of `degree`.
    pub fn from_fn(degree: DegreeVector, mut coeff: impl FnMut(&MultiIndex) -> T) -> Self {
        let coeffs = Lattice::new(&degree).map(|i| coeff(&i)).collect();
        Self { degree, coeffs }
    }

    pub fn constant(degree: DegreeVector, c: T) -> Self {
        let coeffs = vec![c; degree.lattice_len()];
        Self { degree, coeffs }
    }

    pub fn degree(&self) -> &DegreeVector {
        &self.degree
    }

    pub fn dim(&self) -> usize {
        self.degree.dim()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    fn shape(&self) -> Vec<usize> {
        self.degree.entries().iter().map(|n| n + 1).collect()
    }

    fn flat_index(&self, i: &MultiIndex) -> usize {
        i.entries()
            .iter()
            .zip(self.degree.entries())
            .fold(0, |acc, (&k, &n)| acc * (n + 1) + k)
    }

    pub fn coeff(&self, i: &MultiIndex) -> Result<&T> {
        if i.dim() != self.dim() || !i.le(&self.degree.as_multi_index()) {
            return Err(domain!("index {i} outside the lattice of degree {}", self.degree));
        }
        Ok(&self.coeffs[self.flat_index(i)])
    }

    /// Coefficient at the vertex whose coordinates are `vertex[j] ? 1 : 0`.
    pub fn corner(&self, vertex: &[bool]) -> &T {
        let i = MultiIndex::new(
            vertex
                .iter()
                .zip(self.degree.entries())
                .map(|(&hi, &n)| if hi { n } else { 0 })
                .collect(),
        );
        &self.coeffs[self.flat_index(&i)]
    }

    /// Evaluate by de Casteljau's recurrence, last axis first.
    pub fn eval(&self, x: &[T]) -> Result<T> {
        if x.len() != self.dim() {
            return Err(contract!("point has {} coordinates, polynomial has {}", x.len(), self.dim()));
        }
        x.iter().try_for_each(check_unit_generic)?;
        let shape = self.shape();
        let mut current = self.coeffs.clone();
        for axis in (0..self.dim()).rev() {
            current = current
                .chunks(shape[axis])
                .map(|fiber| de_casteljau(fiber, &x[axis]))
                .collect();
        }
        Ok(current.swap_remove(0))
    }

    fn map_axis(&self, axis: usize, map: &FiberMap<T>, new_degree: DegreeVector) -> Self {
        let shape = self.shape();
        let len = shape[axis];
        let inner: usize = shape[axis + 1..].iter().product();
        let outer: usize = shape[..axis].iter().product();
        let new_len = map.out_len();
        let mut out = vec![T::zero(); outer * new_len * inner];
        let mut fiber = Vec::with_capacity(len);
        for o in 0..outer {
            for i in 0..inner {
                fiber.clear();
                fiber.extend((0..len).map(|k| self.coeffs[(o * len + k) * inner + i].clone()));
                for (k, v) in map.apply(&fiber).into_iter().enumerate() {
                    out[(o * new_len + k) * inner + i] = v;
                }
            }
        }
        Self { degree: new_degree, coeffs: out }
    }

    fn check_axis(&self, axis: usize) -> Result<()> {
        if axis >= self.dim() {
            return Err(contract!("axis {axis} out of range for dimension {}", self.dim()));
        }
        Ok(())
    }

    /// Elevate one axis to degree `m`.
    pub fn elevate_axis(&self, axis: usize, m: usize) -> Result<Self> {
        self.check_axis(axis)?;
        let n = self.degree[axis];
        if m < n {
            return Err(domain!("cannot elevate axis {axis} from degree {n} down to {m}"));
        }
        if m == n {
            return Ok(self.clone());
        }
        let mut entries = self.degree.entries().to_vec();
        entries[axis] = m;
        let target = DegreeVector::new(entries)?;
        Ok(self.map_axis(axis, &FiberMap::elevation(n, m), target))
    }

    /// Elevate every axis to the given degree vector.
    pub fn elevate(&self, target: &DegreeVector) -> Result<Self> {
        if target.dim() != self.dim() {
            return Err(contract!("target degree has dimension {}, expected {}", target.dim(), self.dim()));
        }
        (0..self.dim()).try_fold(self.clone(), |p, axis| p.elevate_axis(axis, target[axis]))
    }

    /// Multiply by a polynomial in the single variable `x_axis`.
    pub fn multiply_axis(&self, axis: usize, q: &BernsteinPoly1D<T>) -> Result<Self> {
        self.check_axis(axis)?;
        let mut entries = self.degree.entries().to_vec();
        entries[axis] += q.degree();
        let target = DegreeVector::new(entries)?;
        let map = FiberMap::product(self.degree[axis], q.coeffs());
        Ok(self.map_axis(axis, &map, target))
    }

    fn zip_with(&self, other: &Self, op: impl Fn(T, T) -> T) -> Result<Self> {
        if self.degree != other.degree {
            return Err(contract!(
                "degree mismatch {} vs {}; elevate to a common degree first",
                self.degree,
                other.degree
            ));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| op(a.clone(), b.clone()))
            .collect();
        Ok(Self { degree: self.degree.clone(), coeffs })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self {
            degree: self.degree.clone(),
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    /// Smallest coefficient and its lattice index.
    pub fn min_coefficient(&self) -> (T, MultiIndex) {
        let (v, flat) = min_with_index(&self.coeffs);
        let idx = Lattice::new(&self.degree).nth(flat).expect("flat index in range");
        (v, idx)
    }

    /// Whether every coefficient is nonnegative: exactly for rationals,
    /// up to [`POSITIVITY_TOLERANCE`] for floats.
    pub fn has_positive_coefficients(&self) -> bool {
        let (min, _) = self.min_coefficient();
        if T::EXACT {
            min >= T::zero()
        } else {
            min.to_f64() >= POSITIVITY_TOLERANCE
        }
    }

    /// Integral over the unit cube: the mean of the coefficients.
    pub fn integral(&self) -> T {
        mean(&self.coeffs)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> TensorBernstein<U> {
        TensorBernstein { degree: self.degree.clone(), coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> TensorBernstein<f64> {
        self.map(|c| c.to_f64())
    }

    /// Text form: a header `bernstein d n_1 ... n_d`, then one coefficient per line
    /// in lattice order.
    pub fn to_text(&self) -> String {
        let mut s = format!("bernstein {}", self.dim());
        for n in self.degree.entries() {
            write!(s, " {n}").unwrap();
        }
        s.push('\n');
        for c in &self.coeffs {
            s.push_str(&c.to_text());
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("bernstein") {
            return Err(Error::Parse(format!("bad header `{header}`")));
        }
        let nums: Vec<usize> = fields
            .map(|f| f.parse().map_err(|_| Error::Parse(format!("bad header field `{f}`"))))
            .collect::<Result<_>>()?;
        let (&d, degrees) = nums
            .split_first()
            .ok_or_else(|| Error::Parse("header lacks dimension".into()))?;
        if degrees.len() != d {
            return Err(Error::Parse(format!("header declares d={d} but lists {} degrees", degrees.len())));
        }
        let degree = DegreeVector::new(degrees.to_vec())?;
        let coeffs: Vec<T> = lines
            .map(|l| T::parse_text(l).ok_or_else(|| Error::Parse(format!("bad coefficient `{l}`"))))
            .collect::<Result<_>>()?;
        Self::new(degree, coeffs)
    }
}

impl<T: Scalar> TryFrom<BernsteinPoly1D<T>> for TensorBernstein<T> {
    type Error = Error;

    /// Fails for degree-0 polynomials, which have no tensor counterpart.
    fn try_from(p: BernsteinPoly1D<T>) -> Result<Self> {
        let degree = DegreeVector::new(vec![p.degree()])?;
        Ok(Self { degree, coeffs: p.coeffs })
    }
}
