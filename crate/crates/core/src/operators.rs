//! The tensor-product Bernstein operator `B_n^f` and the corrected operator
//! `Q_{n,r}^f`, built by the recursion
//!
//! ```text
//! Q_{n,r}^f = B_n^f - sum_{i=2}^{r} 1/i! sum_{<j>=i} C(i; j) prod_a Tbar_{n_a j_a}(x_a) Q_{n,r-i}^{f^(j)}
//! ```
//!
//! with `Q_{n,0} = Q_{n,1} = B_n`. The result has degree `n + (r, ..., r)`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::analysis::ErrorProfile;
use crate::bernstein::{basis_row, BernsteinPoly1D, TensorBernstein};
use crate::combinatorics::{multinomial, order_slice, DegreeVector, Lattice, MultiIndex};
use crate::error::{contract, domain, Result};
use crate::moments::central_moments;
use crate::oracle::FunctionOracle;
use crate::scalar::Scalar;

/// A target paired with a degree vector and correction order.
#[derive(Clone, Debug)]
pub struct ApproximantSpec {
    pub f: FunctionOracle,
    pub n: DegreeVector,
    pub r: usize,
}

impl ApproximantSpec {
    pub fn new(f: FunctionOracle, n: DegreeVector, r: usize) -> Result<Self> {
        check_spec(&f, &n, r)?;
        Ok(Self { f, n, r })
    }

    pub fn build<T: Scalar>(&self) -> Result<TensorBernstein<T>> {
        lorentz_q(&self.f, &self.n, self.r)
    }
}

fn check_spec(f: &FunctionOracle, n: &DegreeVector, r: usize) -> Result<()> {
    if f.dim() != n.dim() {
        return Err(contract!("function has dimension {}, degree vector {}", f.dim(), n.dim()));
    }
    // r = 0, 1 need no derivatives
    if r >= 2 && r > f.max_order() {
        return Err(domain!(
            "correction order {r} exceeds the derivatives available from `{}` ({})",
            f.name(),
            f.max_order()
        ));
    }
    Ok(())
}

fn bernstein_of_partial<T: Scalar>(
    f: &FunctionOracle,
    partial: &MultiIndex,
    n: &DegreeVector,
) -> Result<TensorBernstein<T>> {
    let coeffs = Lattice::new(n)
        .map(|k| f.sample::<T>(partial, &k, n))
        .collect::<Result<Vec<T>>>()?;
    TensorBernstein::new(n.clone(), coeffs)
}

/// `B_n^f`: the tensor with coefficients `f(i/n)`.
pub fn bernstein_op<T: Scalar>(f: &FunctionOracle, n: &DegreeVector) -> Result<TensorBernstein<T>> {
    check_spec(f, n, 0)?;
    bernstein_of_partial(f, &MultiIndex::zeros(n.dim()), n)
}

struct QBuilder<'a, T: Scalar> {
    f: &'a FunctionOracle,
    n: &'a DegreeVector,
    /// `scaled_moments[axis][s]` is `Tbar_{n_axis, s}` in Bernstein form.
    scaled_moments: Vec<Vec<BernsteinPoly1D<T>>>,
    memo: HashMap<(MultiIndex, usize), TensorBernstein<T>>,
}

impl<'a, T: Scalar> QBuilder<'a, T> {
    fn new(f: &'a FunctionOracle, n: &'a DegreeVector, r: usize) -> Result<Self> {
        let mut by_degree: HashMap<usize, Vec<BernsteinPoly1D<T>>> = HashMap::new();
        let mut scaled_moments = Vec::with_capacity(n.dim());
        for &na in n.entries() {
            if let std::collections::hash_map::Entry::Vacant(slot) = by_degree.entry(na) {
                let table = central_moments(na, r)?;
                let polys = (0..=r)
                    .map(|s| {
                        let exact = table.scaled_bernstein(s);
                        BernsteinPoly1D::new(exact.coeffs().iter().map(T::from_rational).collect())
                    })
                    .collect::<Result<Vec<_>>>()?;
                slot.insert(polys);
            }
            scaled_moments.push(by_degree[&na].clone());
        }
        Ok(Self { f, n, scaled_moments, memo: HashMap::new() })
    }

    /// `Q_{n,r}` of the partial derivative `f^(partial)`, at degree `n + r`.
    fn q(&mut self, partial: &MultiIndex, r: usize) -> Result<TensorBernstein<T>> {
        let key = (partial.clone(), r);
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let target = self.n.elevated(r);
        let mut acc = bernstein_of_partial::<T>(self.f, partial, self.n)?.elevate(&target)?;
        let mut factorial = BigInt::from(1);
        for i in 2..=r {
            factorial *= i;
            for j in order_slice(self.n.dim(), i) {
                let weight = T::from_ratio(&BigInt::from(multinomial(&j)), &factorial);
                let mut term = self.q(&(partial + &j), r - i)?;
                for axis in 0..self.n.dim() {
                    if j[axis] > 0 {
                        term = term.multiply_axis(axis, &self.scaled_moments[axis][j[axis]])?;
                    }
                }
                debug_assert!(term.degree().as_multi_index().le(&target.as_multi_index()));
                acc = acc.sub(&term.elevate(&target)?.scale(&weight))?;
            }
        }
        self.memo.insert(key, acc.clone());
        Ok(acc)
    }
}

/// `Q_{n,r}^f` in Bernstein form of degree `n + (r, ..., r)`.
pub fn lorentz_q<T: Scalar>(
    f: &FunctionOracle,
    n: &DegreeVector,
    r: usize,
) -> Result<TensorBernstein<T>> {
    check_spec(f, n, r)?;
    QBuilder::new(f, n, r)?.q(&MultiIndex::zeros(n.dim()), r)
}

/// Evaluate `Q_{n,r}^f(x)` straight from the recursion, using direct sums for
/// both the Bernstein operator and the scaled central moments. Shares no code
/// with the coefficient assembly in [`lorentz_q`].
pub fn eval_q_pointwise(f: &FunctionOracle, n: &DegreeVector, r: usize, x: &[f64]) -> Result<f64> {
    check_spec(f, n, r)?;
    if x.len() != n.dim() {
        return Err(contract!("point has {} coordinates, expected {}", x.len(), n.dim()));
    }
    let rows: Vec<Vec<f64>> = (0..n.dim()).map(|a| basis_row(n[a], x[a])).collect::<Result<_>>()?;
    // tbar[a][s] = sum_k (k/n_a - x_a)^s p_{n_a k}(x_a)
    let tbar: Vec<Vec<f64>> = (0..n.dim())
        .map(|a| {
            (0..=r)
                .map(|s| {
                    rows[a]
                        .iter()
                        .enumerate()
                        .map(|(k, p)| (k as f64 / n[a] as f64 - x[a]).powi(s as i32) * p)
                        .sum()
                })
                .collect()
        })
        .collect();
    let mut bernstein_memo: HashMap<MultiIndex, f64> = HashMap::new();
    let mut bernstein = |partial: &MultiIndex| -> Result<f64> {
        if let Some(v) = bernstein_memo.get(partial) {
            return Ok(*v);
        }
        let mut total = 0.0;
        for k in Lattice::new(n) {
            let weight: f64 = (0..n.dim()).map(|a| rows[a][k[a]]).product();
            if weight != 0.0 {
                total += weight * f.sample::<f64>(partial, &k, n)?;
            }
        }
        bernstein_memo.insert(partial.clone(), total);
        Ok(total)
    };

    fn recurse(
        partial: &MultiIndex,
        r: usize,
        tbar: &[Vec<f64>],
        bernstein: &mut dyn FnMut(&MultiIndex) -> Result<f64>,
        memo: &mut HashMap<(MultiIndex, usize), f64>,
    ) -> Result<f64> {
        if let Some(v) = memo.get(&(partial.clone(), r)) {
            return Ok(*v);
        }
        let mut value = bernstein(partial)?;
        let mut factorial = 1.0;
        for i in 2..=r {
            factorial *= i as f64;
            for j in order_slice(partial.dim(), i) {
                let moment: f64 = (0..j.dim()).map(|a| tbar[a][j[a]]).product();
                let coeff = multinomial(&j).to_f64().unwrap_or(f64::NAN) / factorial;
                value -= coeff * moment * recurse(&(partial + &j), r - i, tbar, bernstein, memo)?;
            }
        }
        memo.insert((partial.clone(), r), value);
        Ok(value)
    }

    recurse(&MultiIndex::zeros(n.dim()), r, &tbar, &mut bernstein, &mut HashMap::new())
}

/// Uniform tensor grid on `[0,1]^d` with spacing at most `grid_step`.
pub fn tensor_grid(d: usize, grid_step: f64) -> Result<Vec<Vec<f64>>> {
    if !(grid_step > 0.0 && grid_step <= 1.0) {
        return Err(domain!("grid step must lie in (0, 1], got {grid_step}"));
    }
    let cells = (1.0 / grid_step - 1e-9).ceil().max(1.0) as usize;
    let n = DegreeVector::uniform(d, cells)?;
    Ok(Lattice::new(&n)
        .map(|k| k.entries().iter().map(|&e| e as f64 / cells as f64).collect())
        .collect())
}

/// The `2^d` vertices of the unit cube, in lattice order.
pub fn vertices(d: usize) -> Vec<Vec<f64>> {
    Lattice::with_upper(vec![1; d])
        .map(|k| k.entries().iter().map(|&e| e as f64).collect())
        .collect()
}

/// `|f - P|` on the tensor grid of spacing `grid_step`, plus all vertices.
pub fn error_profile(f: &FunctionOracle, p: &TensorBernstein<f64>, grid_step: f64) -> Result<ErrorProfile> {
    error_profile_at(f, p, tensor_grid(f.dim(), grid_step)?)
}

/// `|f - P|` at the given points (vertices are evaluated separately).
pub fn error_profile_at(
    f: &FunctionOracle,
    p: &TensorBernstein<f64>,
    points: Vec<Vec<f64>>,
) -> Result<ErrorProfile> {
    if p.dim() != f.dim() {
        return Err(contract!("polynomial has dimension {}, function {}", p.dim(), f.dim()));
    }
    let mut f_values = Vec::with_capacity(points.len());
    let mut p_values = Vec::with_capacity(points.len());
    for x in &points {
        f_values.push(f.eval(x));
        p_values.push(p.eval(x)?);
    }
    let vertex_errors = vertices(f.dim())
        .iter()
        .map(|v| Ok((f.eval(v) - p.eval(v)?).abs()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(ErrorProfile::new(points, f_values, p_values, vertex_errors))
}
