//! Exact integer combinatorics and multi-index enumeration.
//!
//! All enumerations are row-major: the last entry of a multi-index varies
//! fastest. Coefficient tensors throughout the crate are stored in this order.

use std::fmt;
use std::ops::{Add, Index};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// A d-tuple of nonnegative integers: a lattice point or a differentiation order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(entries: Vec<usize>) -> Self {
        Self(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    /// The unit multi-index along `axis`.
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut e = vec![0; dim];
        e[axis] = 1;
        Self(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Sum of the entries.
    pub fn order(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self - unit(axis)`, or `None` when that entry is already zero.
    pub fn decrement(&self, axis: usize) -> Option<MultiIndex> {
        let mut e = self.0.clone();
        e[axis] = e[axis].checked_sub(1)?;
        Some(Self(e))
    }
}

impl Index<usize> for MultiIndex {
    type Output = usize;
    fn index(&self, axis: usize) -> &usize {
        &self.0[axis]
    }
}

impl Add for &MultiIndex {
    type Output = MultiIndex;
    fn add(self, rhs: &MultiIndex) -> MultiIndex {
        assert_eq!(self.dim(), rhs.dim(), "multi-index dimension mismatch");
        MultiIndex(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl From<Vec<usize>> for MultiIndex {
    fn from(v: Vec<usize>) -> Self {
        Self(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Per-axis polynomial degrees; every entry is at least one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeVector(Vec<usize>);

impl DegreeVector {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if entries.is_empty() {
            return Err(domain!("degree vector must have at least one axis"));
        }
        if let Some(pos) = entries.iter().position(|&n| n == 0) {
            return Err(domain!("degree on axis {pos} must be >= 1"));
        }
        Ok(Self(entries))
    }

    /// The same degree `n` on each of `dim` axes.
    pub fn uniform(dim: usize, n: usize) -> Result<Self> {
        Self::new(vec![n; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// Number of lattice points, `prod (n_j + 1)`.
    pub fn lattice_len(&self) -> usize {
        self.0.iter().map(|n| n + 1).product()
    }

    /// Raise every axis by `r`.
    pub fn elevated(&self, r: usize) -> DegreeVector {
        DegreeVector(self.0.iter().map(|n| n + r).collect())
    }

    pub fn as_multi_index(&self) -> MultiIndex {
        MultiIndex(self.0.clone())
    }
}

impl Index<usize> for DegreeVector {
    type Output = usize;
    fn index(&self, axis: usize) -> &usize {
        &self.0[axis]
    }
}

impl fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&MultiIndex(self.0.clone()), f)
    }
}

/// Exact `C(n, k)`.
pub fn binomial(n: i64, k: i64) -> Result<BigUint> {
    if n < 0 || k < 0 || k > n {
        return Err(domain!("binomial({n}, {k}) requires 0 <= k <= n"));
    }
    Ok(binomial_unchecked(n as u64, k as u64))
}

pub(crate) fn binomial_unchecked(n: u64, k: u64) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for j in 0..k {
        // acc * (n - j) is always divisible by j + 1 at this point
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// The full row `C(n, 0..=n)`.
pub fn binomial_row(n: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n + 1);
    let mut acc = BigUint::one();
    row.push(acc.clone());
    for k in 0..n {
        acc = acc * (n - k) / (k + 1);
        row.push(acc.clone());
    }
    row
}

/// Multinomial coefficient `<i>! / (i_1! ... i_d!)`.
pub fn multinomial(i: &MultiIndex) -> BigUint {
    let mut acc = BigUint::one();
    let mut partial = 0u64;
    for &e in i.entries() {
        partial += e as u64;
        acc *= binomial_unchecked(partial, e as u64);
    }
    acc
}

/// Row-major iterator over `0 <= i <= n`.
#[derive(Clone, Debug)]
pub struct Lattice {
    upper: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl Lattice {
    pub fn new(n: &DegreeVector) -> Self {
        Self::with_upper(n.entries().to_vec())
    }

    pub(crate) fn with_upper(upper: Vec<usize>) -> Self {
        let next = Some(vec![0; upper.len()]);
        Self { upper, next }
    }
}

impl Iterator for Lattice {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut axis = succ.len();
        while axis > 0 {
            axis -= 1;
            if succ[axis] < self.upper[axis] {
                succ[axis] += 1;
                self.next = Some(succ);
                break;
            }
            succ[axis] = 0;
        }
        Some(MultiIndex(current))
    }
}

/// All multi-indices `0 <= i <= n` in row-major order.
pub fn lattice(n: &DegreeVector) -> Vec<MultiIndex> {
    Lattice::new(n).collect()
}

/// All multi-indices with `d` entries summing to exactly `r`, in lexicographic order.
pub fn order_slice(d: usize, r: usize) -> Vec<MultiIndex> {
    fn fill(prefix: &mut Vec<usize>, d: usize, remaining: usize, out: &mut Vec<MultiIndex>) {
        if prefix.len() + 1 == d {
            prefix.push(remaining);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in 0..=remaining {
            prefix.push(e);
            fill(prefix, d, remaining - e, out);
            prefix.pop();
        }
    }
    assert!(d >= 1, "order_slice needs at least one axis");
    let mut out = Vec::new();
    fill(&mut Vec::with_capacity(d), d, r, &mut out);
    out
}

/// Taxicab norm `sum |x_j|`.
pub fn taxicab(x: &[f64]) -> f64 {
    x.iter().map(|v| v.abs()).sum()
}
