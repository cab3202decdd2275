//! Numeric abstraction shared by the spectral and oracle layers.
//!
//! Everything that can be exact is computed in [`Rational`](crate::Rational);
//! the same routines also run over `f64`/`f32` for quick float checks.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

pub trait Scalar: Send + Sync + Clone + Debug + PartialOrd + Num + Signed + FromPrimitive {
    fn from_ratio(r: &BigRational) -> Self;

    fn from_bigint(i: &BigInt) -> Self {
        Self::from_ratio(&BigRational::from_integer(i.clone()))
    }

    fn to_f64(&self) -> f64;

    /// True when arithmetic in this type never rounds.
    fn is_exact() -> bool;

    /// Equality for exact types, absolute tolerance otherwise.
    fn close(&self, other: &Self, tol: f64) -> bool {
        if Self::is_exact() {
            self == other
        } else {
            (self.to_f64() - other.to_f64()).abs() <= tol
        }
    }

    fn powu(&self, k: u32) -> Self {
        num_traits::pow(self.clone(), k as usize)
    }
}

impl Scalar for f64 {
    fn from_ratio(r: &BigRational) -> Self {
        ratio_to_f64(r)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_exact() -> bool {
        false
    }
    fn powu(&self, k: u32) -> Self {
        self.powi(k as i32)
    }
}

impl Scalar for f32 {
    fn from_ratio(r: &BigRational) -> Self {
        ratio_to_f64(r) as f32
    }
    fn to_f64(&self) -> f64 {
        *self as f64
    }
    fn is_exact() -> bool {
        false
    }
    fn powu(&self, k: u32) -> Self {
        self.powi(k as i32)
    }
}

impl Scalar for BigRational {
    fn from_ratio(r: &BigRational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }
    fn is_exact() -> bool {
        true
    }
}

/// Converts without overflowing when numerator and denominator are both huge.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(r) {
        if v.is_finite() && (v != 0.0 || r.is_zero()) {
            return v;
        }
    }
    let ln = ln_abs_ratio(r);
    let s = if r.is_negative() { -1.0 } else { 1.0 };
    s * ln.exp()
}

pub fn ln_abs_bigint(i: &BigInt) -> f64 {
    let bits = i.bits();
    if bits < 1000 {
        return i.to_f64().map(|v| v.abs().ln()).unwrap_or(f64::NEG_INFINITY);
    }
    let shift = bits - 64;
    let top = (i.abs() >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_abs_ratio(r: &BigRational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_abs_bigint(r.numer()) - ln_abs_bigint(r.denom())
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

pub fn rat_one() -> BigRational {
    BigRational::one()
}
