//! Numeric backends.
//!
//! Every combinatorial and polynomial operation is generic over [`QField`],
//! which has four implementations: `f64` (real fast path), [`Scalar`]
//! (complex, 53-bit mantissa), [`DoubleDouble`] (real, about 106-bit
//! mantissa) and [`ExactRational`] (arbitrary-size reduced fractions).
//! Identity checks with rational `q` run on the exact backend so that
//! round-off cannot hide a failure; alternating series whose terms dwarf
//! their sum run on the double-double backend.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{QError, Result};

/// Complex scalar used for arguments such as `t e^{iky}`.
pub type Scalar = Complex64;

/// Exact rational number; always reduced with a positive denominator.
pub type ExactRational = BigRational;

/// Unevaluated sum of two `f64`s, roughly 32 significant digits.
///
/// Addition, subtraction and multiplication come from `twofloat`. Division
/// between two double-doubles is done here: the upstream quotient forms its
/// residual `1 - b_hi / b_hi` without a fused multiply-add, which makes it
/// exact zero and the result only as good as an `f64` quotient.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd)]
pub struct DoubleDouble(TwoFloat);

impl DoubleDouble {
    pub fn hi(&self) -> f64 {
        self.0.hi()
    }

    pub fn lo(&self) -> f64 {
        self.0.lo()
    }

    /// Nearest `f64` to the represented value.
    pub fn to_f64(&self) -> f64 {
        self.0.hi() + self.0.lo()
    }
}

impl From<f64> for DoubleDouble {
    fn from(v: f64) -> Self {
        DoubleDouble(TwoFloat::from(v))
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        DoubleDouble(self.0 + rhs.0)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        DoubleDouble(self.0 - rhs.0)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        DoubleDouble(self.0 * rhs.0)
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        // long division by the leading word, then one correction step;
        // the double-double by f64 quotient is accurate upstream
        let first = self.0 / rhs.0.hi();
        let residual = self.0 - first * rhs.0;
        DoubleDouble(first + residual / rhs.0.hi())
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        DoubleDouble(-self.0)
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        DoubleDouble(TwoFloat::from(0.0))
    }

    fn is_zero(&self) -> bool {
        self.0.hi() == 0.0 && self.0.lo() == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        DoubleDouble(TwoFloat::from(1.0))
    }
}

/// Field operations required by the q-calculus kernels.
pub trait QField:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` for backends where `==` is exact equality of values.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    /// Absolute value (modulus) as a float, used for convergence tests.
    fn magnitude(&self) -> f64;

    fn is_finite(&self) -> bool;

    /// Integer power; negative exponents invert.
    fn powi(&self, exp: i64) -> Self {
        if exp < 0 {
            return Self::one() / self.powi(-exp);
        }
        let mut base = self.clone();
        let mut e = exp as u64;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// `1 - self^n`.
    fn one_minus_pow(&self, n: i64) -> Self {
        Self::one() - self.powi(n)
    }

    /// Equality up to the backend's resolution: exact for rationals,
    /// `rel_tol` relative for floating backends.
    fn approx_eq(&self, other: &Self, rel_tol: f64) -> bool {
        if Self::EXACT {
            return self == other;
        }
        let diff = (self.clone() - other.clone()).magnitude();
        diff <= rel_tol * self.magnitude().max(other.magnitude())
    }

    /// Short human-readable form for report parameters.
    fn describe(&self) -> String {
        format!("{self:?}")
    }

    /// Whether a factor such as `1 - b q^k` should be treated as a pole.
    fn is_vanishing(&self) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= 1e-13
        }
    }
}

impl QField for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn powi(&self, exp: i64) -> Self {
        if let Ok(e) = i32::try_from(exp) {
            f64::powi(*self, e)
        } else {
            self.powf(exp as f64)
        }
    }

    fn one_minus_pow(&self, n: i64) -> Self {
        if *self > 0.0 {
            -(n as f64 * self.ln()).exp_m1()
        } else {
            1.0 - QField::powi(self, n)
        }
    }
}

impl QField for Complex64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    fn describe(&self) -> String {
        if self.im == 0.0 {
            format!("{:?}", self.re)
        } else {
            format!("{:?}{:+?}i", self.re, self.im)
        }
    }

    fn one_minus_pow(&self, n: i64) -> Self {
        if self.im == 0.0 {
            Complex64::new(self.re.one_minus_pow(n), 0.0)
        } else {
            Complex64::one() - QField::powi(self, n)
        }
    }
}

impl QField for DoubleDouble {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        let hi = v as f64;
        DoubleDouble(TwoFloat::new_add(hi, (v - hi as i64) as f64))
    }

    fn magnitude(&self) -> f64 {
        self.hi().abs()
    }

    fn describe(&self) -> String {
        format!("{:?}", self.to_f64())
    }

    fn is_finite(&self) -> bool {
        self.hi().is_finite() && self.lo().is_finite()
    }
}

impl QField for BigRational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn describe(&self) -> String {
        self.to_string()
    }

    fn is_finite(&self) -> bool {
        true
    }
}

/// Builds an exact rational `num/den`.
///
/// Panics if `den == 0`.
pub fn rational(num: i64, den: i64) -> ExactRational {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Converts an exact rational to the nearest float.
pub fn rational_to_f64(r: &ExactRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn ensure_finite<T: QField>(value: T, what: &'static str) -> Result<T> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(QError::NonFinite(what))
    }
}

/// Formats a float with 17 significant digits.
pub fn format_f64(v: f64) -> String {
    format!("{:.16e}", v)
}

/// Wire form of a complex value: decimal strings with 17 significant digits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerializedScalar {
    pub re: String,
    pub im: String,
}

impl From<Complex64> for SerializedScalar {
    fn from(z: Complex64) -> Self {
        SerializedScalar {
            re: format_f64(z.re),
            im: format_f64(z.im),
        }
    }
}

impl From<f64> for SerializedScalar {
    fn from(x: f64) -> Self {
        SerializedScalar::from(Complex64::new(x, 0.0))
    }
}

impl From<&ExactRational> for SerializedScalar {
    fn from(r: &ExactRational) -> Self {
        SerializedScalar {
            re: r.to_string(),
            im: "0".to_string(),
        }
    }
}

impl SerializedScalar {
    /// Parses the stored strings back into a complex value.
    pub fn to_complex(&self) -> Option<Complex64> {
        let parse = |s: &str| -> Option<f64> {
            if let Some((n, d)) = s.split_once('/') {
                Some(n.parse::<f64>().ok()? / d.parse::<f64>().ok()?)
            } else {
                s.parse().ok()
            }
        };
        Some(Complex64::new(parse(&self.re)?, parse(&self.im)?))
    }
}
