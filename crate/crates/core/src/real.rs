//! Scalar abstraction shared by the working-precision evaluators and their
//! extended-precision twins, plus an exponent-tracked running product.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::extprec::ExtReal;

/// Arithmetic needed by the interpolation kernels.
pub trait Real:
    Copy
    + Debug
    + Send
    + Sync
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
    fn abs(self) -> Self;
    fn is_zero(self) -> bool;
    /// `floor(log2 |x|)` of the leading component; 0 for zero.
    fn exponent(self) -> i32;
    /// Exact scaling by `2^e`.
    fn mul_pow2(self, e: i32) -> Self;
}

impl Real for f64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
    #[inline]
    fn is_zero(self) -> bool {
        self == 0.0
    }
    #[inline]
    fn exponent(self) -> i32 {
        exponent(self)
    }
    #[inline]
    fn mul_pow2(self, e: i32) -> Self {
        ldexp(self, e)
    }
}

impl Real for ExtReal {
    #[inline]
    fn from_f64(x: f64) -> Self {
        ExtReal::from_f64(x)
    }
    #[inline]
    fn to_f64(self) -> f64 {
        ExtReal::to_f64(self)
    }
    #[inline]
    fn abs(self) -> Self {
        ExtReal::abs(self)
    }
    #[inline]
    fn is_zero(self) -> bool {
        ExtReal::is_zero(self)
    }
    #[inline]
    fn exponent(self) -> i32 {
        exponent(self.hi())
    }
    #[inline]
    fn mul_pow2(self, e: i32) -> Self {
        ExtReal::mul_pow2(self, e)
    }
}

/// `floor(log2 |x|)` for finite non-zero `x`, including subnormals.
#[inline]
pub fn exponent(x: f64) -> i32 {
    let bits = x.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i32;
    if biased == 0 {
        if x == 0.0 {
            return 0;
        }
        return exponent(x * 2f64.powi(64)) - 64;
    }
    biased - 1023
}

/// `x * 2^e`, exact unless the result leaves the normal range.
#[inline]
pub fn ldexp(x: f64, e: i32) -> f64 {
    if (-1022..=1023).contains(&e) {
        return x * f64::from_bits(((e + 1023) as u64) << 52);
    }
    let mut x = x;
    let mut e = e;
    while e > 1023 {
        x *= f64::from_bits(((1023 + 1023) as u64) << 52);
        e -= 1023;
    }
    while e < -1022 {
        x *= f64::from_bits(1u64 << 52);
        e += 1022;
    }
    x * f64::from_bits(((e + 1023) as u64) << 52)
}

/// A running product kept as `mantissa * 2^exp` with `|mantissa|` in `[1, 2)`,
/// so that long products of small or large factors never over- or underflow.
#[derive(Clone, Copy, Debug)]
pub struct ScaledProduct<R> {
    mantissa: R,
    exp: i64,
}

impl<R: Real> Default for ScaledProduct<R> {
    fn default() -> Self {
        Self::new()
    }
}

impl<R: Real> ScaledProduct<R> {
    #[inline]
    pub fn new() -> Self {
        ScaledProduct {
            mantissa: R::one(),
            exp: 0,
        }
    }

    #[inline]
    pub fn mul(&mut self, factor: R) {
        // factors are pre-scaled so the product of a normalized mantissa and
        // any non-zero factor stays in the normal range
        let e = factor.exponent();
        self.mantissa = self.mantissa * factor.mul_pow2(-e);
        self.exp += e as i64;
        let m = self.mantissa.exponent();
        if m != 0 {
            self.mantissa = self.mantissa.mul_pow2(-m);
            self.exp += m as i64;
        }
    }

    #[inline]
    pub fn mantissa(&self) -> R {
        self.mantissa
    }

    #[inline]
    pub fn exp(&self) -> i64 {
        self.exp
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    /// `value * product`, with the power of two applied last.
    #[inline]
    pub fn times(&self, value: R) -> R {
        scale_pow2(self.mantissa * value, self.exp)
    }

    /// `1 / product`.
    #[inline]
    pub fn recip(&self) -> R {
        scale_pow2(R::one() / self.mantissa, -self.exp)
    }

    #[inline]
    pub fn value(&self) -> R {
        scale_pow2(self.mantissa, self.exp)
    }
}

#[inline]
pub(crate) fn scale_pow2<R: Real>(x: R, e: i64) -> R {
    let e = e.clamp(-100_000, 100_000) as i32;
    x.mul_pow2(e)
}
