//! Scalar abstraction shared by the floating-point and exact-rational algebra.
//!
//! Catalog manifolds have rational structure constants, so every pointwise
//! algebraic operation (Koszul, curvature, covariant derivatives of bivector
//! fields) can be carried out exactly. The same kernels are instantiated at
//! `f64` for chart-dependent work.

use num_rational::Ratio;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Exact scalar used by the rational-arithmetic mode.
pub type Rational = Ratio<i64>;

pub trait Scalar:
    Copy
    + Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// Lossy view used when exact results are compared against floats.
    fn to_f64(&self) -> f64;

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }
}

impl Scalar for f64 {
    const NAME: &'static str = "f64";

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Rational {
    const NAME: &'static str = "rational";

    fn zero() -> Self {
        Ratio::new(0, 1)
    }
    fn one() -> Self {
        Ratio::new(1, 1)
    }
    fn from_int(n: i64) -> Self {
        Ratio::new(n, 1)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }
    fn is_zero(&self) -> bool {
        *self.numer() == 0
    }
    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}
