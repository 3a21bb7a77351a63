//! Extended precision arithmetic on unevaluated pairs of `f64` values.
//!
//! An [`ExtReal`] represents the real number `hi + lo` with `hi = fl(hi + lo)`,
//! which gives roughly 106 significant bits. It is the reference arithmetic for
//! every error measurement in this crate: quantities of size `1e-17` and above
//! are resolved with at least ten guard digits.
//!
//! All operations assume round-to-nearest-even; [`round_to_nearest_even`]
//! probes this at run time.

use std::cmp::Ordering;
use std::fmt;
use std::hint::black_box;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// `2^27 + 1`, the Veltkamp splitting constant for binary64.
const SPLITTER: f64 = 134_217_729.0;

/// Largest magnitude accepted by [`ExtReal::sin_cos`].
pub const SINCOS_MAX_ARG: f64 = 1.0e6;

/// Relative accuracy promised by [`ExtReal::sin_cos`].
pub const SINCOS_REL_TOL: f64 = 1.0e-28;

/// Error-free sum: `s + e == a + b` exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Error-free sum for `|a| >= |b|` (or `a == 0`).
#[inline]
pub fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Veltkamp split of `a` into two 26-bit halves with `a == hi + lo`.
#[inline]
fn split(a: f64) -> (f64, f64) {
    let t = SPLITTER * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

/// Dekker's error-free product: `p + e == a * b` exactly, barring overflow
/// and underflow.
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, e)
}

/// Returns `true` when the floating-point unit rounds to nearest, ties to even.
pub fn round_to_nearest_even() -> bool {
    let one = black_box(1.0_f64);
    let h = black_box(f64::EPSILON / 2.0);
    let tie_down = one + h == 1.0;
    let tie_up = one + 3.0 * h == 1.0 + 4.0 * h;
    let neg_tie = -one - h == -1.0;
    let nearest = one + black_box(h * 1.0078125) == 1.0 + 2.0 * h;
    tie_down && tie_up && neg_tie && nearest
}

/// Extended-precision real number `hi + lo`.
#[derive(Clone, Copy, Default)]
pub struct ExtReal {
    hi: f64,
    lo: f64,
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal { hi: 0.0, lo: 0.0 };
    pub const ONE: ExtReal = ExtReal { hi: 1.0, lo: 0.0 };

    /// π to about 106 bits.
    pub const PI: ExtReal = ExtReal {
        hi: PI_PARTS[0],
        lo: PI_PARTS[1],
    };

    /// Builds the normalized pair for the exact value `hi + lo`.
    #[inline]
    pub fn new(hi: f64, lo: f64) -> Self {
        let (h, l) = two_sum(hi, lo);
        ExtReal { hi: h, lo: l }
    }

    #[inline]
    pub const fn from_f64(x: f64) -> Self {
        ExtReal { hi: x, lo: 0.0 }
    }

    /// Exact sum of two doubles.
    #[inline]
    pub fn sum_of(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        ExtReal { hi, lo }
    }

    /// Exact product of two doubles.
    #[inline]
    pub fn product_of(a: f64, b: f64) -> Self {
        let (p, e) = two_prod(a, b);
        let (hi, lo) = quick_two_sum(p, e);
        ExtReal { hi, lo }
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    /// Correctly rounded working-precision value of `hi + lo`.
    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.hi == 0.0
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    #[inline]
    pub fn is_sign_negative(self) -> bool {
        self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0)
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.is_sign_negative() {
            -self
        } else {
            self
        }
    }

    /// Exact multiplication by `2^e`, as long as neither component leaves the
    /// normal range.
    #[inline]
    pub fn mul_pow2(self, e: i32) -> Self {
        ExtReal {
            hi: crate::real::ldexp(self.hi, e),
            lo: crate::real::ldexp(self.lo, e),
        }
    }

    #[inline]
    pub fn square(self) -> Self {
        self * self
    }

    #[inline]
    pub fn recip(self) -> Self {
        ExtReal::ONE / self
    }

    fn check(self, op: &str) -> Result<Self> {
        if !self.is_finite() {
            return Err(Error::Range(format!("{op} overflowed")));
        }
        if self.hi != 0.0 && self.hi.abs() < f64::MIN_POSITIVE {
            return Err(Error::Range(format!("{op} underflowed")));
        }
        Ok(self)
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self> {
        (self + rhs).check("addition")
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self> {
        (self - rhs).check("subtraction")
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self> {
        let p = (self * rhs).check("multiplication")?;
        if p.is_zero() && !self.is_zero() && !rhs.is_zero() {
            return Err(Error::Range("multiplication underflowed".into()));
        }
        Ok(p)
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        let q = (self / rhs).check("division")?;
        if q.is_zero() && !self.is_zero() {
            return Err(Error::Range("division underflowed".into()));
        }
        Ok(q)
    }

    /// Saturating conversion to `f64`; the flag reports overflow to infinity.
    pub fn to_f64_checked(self) -> (f64, bool) {
        let v = self.to_f64();
        (v, v.is_infinite() && self.hi.is_finite())
    }

    /// Simultaneous sine and cosine.
    ///
    /// Arguments are reduced modulo π/2 against a four-term representation of
    /// π; the reduction is carried out exactly, so the only reduction error is
    /// the truncation of π. Fails with a domain error when `|x| > 1e6` or when
    /// that truncation would exceed `1e-28` relative to the reduced argument.
    pub fn sin_cos(self) -> Result<(ExtReal, ExtReal)> {
        if !self.is_finite() {
            return Err(Error::Domain("sin_cos of a non-finite value".into()));
        }
        if self.hi.abs() > SINCOS_MAX_ARG {
            return Err(Error::Domain(format!(
                "sin_cos argument {:e} exceeds {:e}",
                self.hi, SINCOS_MAX_ARG
            )));
        }
        if self.hi.abs() <= std::f64::consts::FRAC_PI_4 {
            return Ok((sin_taylor(self), cos_taylor(self)));
        }

        let q = (self.hi / HALF_PI_PARTS[0]).round();
        let mut terms = [0.0_f64; 9];
        terms[0] = self.hi;
        terms[1] = self.lo;
        for (i, part) in HALF_PI_PARTS.iter().enumerate() {
            let (p, e) = two_prod(-q, *part);
            terms[2 + 2 * i] = p;
            if 3 + 2 * i < terms.len() {
                terms[3 + 2 * i] = e;
            }
        }
        let r = exact_sum(&terms);
        // |q| * (π/2 - four-term π/2) bounds the reduction error
        let trunc = q.abs() * 2.9e-66;
        if trunc > 0.0 && trunc > SINCOS_REL_TOL * r.abs().to_f64() {
            return Err(Error::Domain(format!(
                "argument {:e} too close to a multiple of pi/2 for accurate reduction",
                self.hi
            )));
        }
        let s = sin_taylor(r);
        let c = cos_taylor(r);
        Ok(match (q as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        })
    }

    pub fn sin(self) -> Result<ExtReal> {
        self.sin_cos().map(|(s, _)| s)
    }

    pub fn cos(self) -> Result<ExtReal> {
        self.sin_cos().map(|(_, c)| c)
    }
}

/// π as a sum of four non-overlapping doubles (about 212 bits).
const PI_PARTS: [f64; 4] = [
    std::f64::consts::PI,
    1.2246467991473532e-16,
    -2.9947698097183397e-33,
    1.1124542208633653e-49,
];

const HALF_PI_PARTS: [f64; 4] = [
    PI_PARTS[0] / 2.0,
    PI_PARTS[1] / 2.0,
    PI_PARTS[2] / 2.0,
    PI_PARTS[3] / 2.0,
];

/// Sums doubles exactly into a non-overlapping expansion, then rounds the
/// expansion to a pair.
fn exact_sum(terms: &[f64]) -> ExtReal {
    let mut expansion: Vec<f64> = Vec::with_capacity(terms.len() + 1);
    for &b in terms {
        if b == 0.0 {
            continue;
        }
        let mut q = b;
        let mut next = Vec::with_capacity(expansion.len() + 1);
        for &e in &expansion {
            let (s, err) = two_sum(q, e);
            if err != 0.0 {
                next.push(err);
            }
            q = s;
        }
        if q != 0.0 {
            next.push(q);
        }
        expansion = next;
    }
    // components are increasing in magnitude
    let mut acc = ExtReal::ZERO;
    for &c in &expansion {
        acc += ExtReal::from_f64(c);
    }
    acc
}

fn sin_taylor(r: ExtReal) -> ExtReal {
    let r2 = r * r;
    let mut term = r;
    let mut sum = r;
    let mut i = 1.0_f64;
    loop {
        term = -(term * r2) / ((2.0 * i) * (2.0 * i + 1.0));
        if term.is_zero() || term.hi.abs() < sum.hi.abs() * 1.0e-35 {
            break;
        }
        sum += term;
        i += 1.0;
    }
    sum
}

fn cos_taylor(r: ExtReal) -> ExtReal {
    let r2 = r * r;
    let mut term = ExtReal::ONE;
    let mut sum = ExtReal::ONE;
    let mut i = 1.0_f64;
    loop {
        term = -(term * r2) / ((2.0 * i - 1.0) * (2.0 * i));
        if term.is_zero() || term.hi.abs() < 1.0e-35 {
            break;
        }
        sum += term;
        i += 1.0;
    }
    sum
}

impl From<f64> for ExtReal {
    #[inline]
    fn from(x: f64) -> Self {
        ExtReal::from_f64(x)
    }
}

impl Neg for ExtReal {
    type Output = ExtReal;

    #[inline]
    fn neg(self) -> ExtReal {
        ExtReal {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for ExtReal {
    type Output = ExtReal;

    #[inline]
    fn add(self, rhs: ExtReal) -> ExtReal {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        ExtReal { hi, lo }
    }
}

impl Sub for ExtReal {
    type Output = ExtReal;

    #[inline]
    fn sub(self, rhs: ExtReal) -> ExtReal {
        self + (-rhs)
    }
}

impl Mul for ExtReal {
    type Output = ExtReal;

    #[inline]
    fn mul(self, rhs: ExtReal) -> ExtReal {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        ExtReal { hi, lo }
    }
}

impl Mul<f64> for ExtReal {
    type Output = ExtReal;

    #[inline]
    fn mul(self, rhs: f64) -> ExtReal {
        let (p, e) = two_prod(self.hi, rhs);
        let e = e + self.lo * rhs;
        let (hi, lo) = quick_two_sum(p, e);
        ExtReal { hi, lo }
    }
}

impl Div for ExtReal {
    type Output = ExtReal;

    #[inline]
    fn div(self, rhs: ExtReal) -> ExtReal {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * q1;
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * q2;
        let q3 = r.hi / rhs.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        ExtReal { hi: q1, lo: q2 } + ExtReal::from_f64(q3)
    }
}

impl Div<f64> for ExtReal {
    type Output = ExtReal;

    #[inline]
    fn div(self, rhs: f64) -> ExtReal {
        let q1 = self.hi / rhs;
        let r = self - ExtReal::product_of(q1, rhs);
        let q2 = r.hi / rhs;
        let r = r - ExtReal::product_of(q2, rhs);
        let q3 = r.hi / rhs;
        let (q1, q2) = quick_two_sum(q1, q2);
        ExtReal { hi: q1, lo: q2 } + ExtReal::from_f64(q3)
    }
}

impl AddAssign for ExtReal {
    #[inline]
    fn add_assign(&mut self, rhs: ExtReal) {
        *self = *self + rhs;
    }
}

impl SubAssign for ExtReal {
    #[inline]
    fn sub_assign(&mut self, rhs: ExtReal) {
        *self = *self - rhs;
    }
}

impl MulAssign for ExtReal {
    #[inline]
    fn mul_assign(&mut self, rhs: ExtReal) {
        *self = *self * rhs;
    }
}

impl PartialEq for ExtReal {
    fn eq(&self, other: &Self) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            ord => Some(ord),
        }
    }
}

impl fmt::Debug for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtReal({:?} + {:?})", self.hi, self.lo)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_f64())
    }
}
