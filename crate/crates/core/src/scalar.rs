//! Numeric backends: `f64` for production runs, `BigRational` as the exact oracle.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub type Rational = BigRational;

pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// True when arithmetic in this type is exact.
    const EXACT: bool;

    fn from_rational(q: &Rational) -> Self;
    /// Exact for rationals (every finite float is a dyadic rational).
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn to_text(&self) -> String;
    fn parse_text(s: &str) -> Option<Self>;

    fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        Self::from_rational(&Rational::new(num.clone(), den.clone()))
    }

    fn from_usize(k: usize) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(k)))
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(q: &Rational) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_text(&self) -> String {
        // `Display` for f64 prints the shortest string that round-trips.
        format!("{self}")
    }

    fn parse_text(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }

    fn from_usize(k: usize) -> Self {
        k as f64
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn from_f64(x: f64) -> Self {
        Rational::from_float(x).expect("finite float")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_text(&self) -> String {
        format!("{self}")
    }

    fn parse_text(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
}

/// `num / den` as an exact rational.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}
