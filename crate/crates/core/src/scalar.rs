//! Dual-mode scalar arithmetic: exact rationals or floats with a tolerance.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Default absolute tolerance for float-mode comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Numeric mode of a scalar, vector, or matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Arbitrary-precision rational arithmetic; no rounding anywhere.
    Exact,
    /// Binary floats compared with an absolute tolerance.
    Float,
}

/// A number in one of the two modes. Arithmetic never mixes modes; values
/// are converted explicitly with [`Scalar::to_float`].
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    pub fn zero(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::zero()),
            Mode::Float => Scalar::Float(0.0),
        }
    }

    pub fn one(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::one()),
            Mode::Float => Scalar::Float(1.0),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    /// Exact rational `num / den`. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_f64(x: f64) -> Self {
        Scalar::Float(x)
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::Exact(r)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(x) => *x,
        }
    }

    /// The same value in float mode.
    pub fn to_float(&self) -> Scalar {
        Scalar::Float(self.to_f64())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    /// Zero test under the mode's comparison rule: exact in EXACT mode,
    /// `|x| <= tol` in FLOAT mode.
    pub fn is_zero_with(&self, tol: f64) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => x.abs() <= tol,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_positive(),
            Scalar::Float(x) => *x > 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_negative(),
            Scalar::Float(x) => *x < 0.0,
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(x) => Scalar::Float(x.abs()),
        }
    }

    pub fn recip(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.recip()),
            Scalar::Float(x) => Scalar::Float(1.0 / x),
        }
    }

    /// Equality under the mode's comparison rule (`|a-b| <= tol` in FLOAT).
    pub fn approx_eq(&self, other: &Scalar, tol: f64) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Float(a), Scalar::Float(b)) => (a - b).abs() <= tol,
            _ => panic!("mixed numeric modes in comparison"),
        }
    }

    /// Integer power, exact in EXACT mode.
    pub fn pow_u32(&self, e: u32) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.pow(e as i32)),
            Scalar::Float(x) => Scalar::Float(x.powi(e as i32)),
        }
    }

    /// `d^p` for a nonnegative distance entry, with the convention `0^p = 0`
    /// for every `p >= 0` (so the exponent 0 leaves the diagonal at zero).
    pub fn metric_pow(&self, p: f64) -> f64 {
        let d = self.to_f64();
        if d == 0.0 {
            0.0
        } else {
            d.powf(p)
        }
    }

    /// True if the exact value is an integer (always false in float mode).
    pub fn is_exact_integer(&self) -> bool {
        matches!(self, Scalar::Exact(r) if r.is_integer())
    }
}

fn binop(
    a: &Scalar,
    b: &Scalar,
    exact: impl Fn(&BigRational, &BigRational) -> BigRational,
    float: impl Fn(f64, f64) -> f64,
) -> Scalar {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => Scalar::Exact(exact(x, y)),
        (Scalar::Float(x), Scalar::Float(y)) => Scalar::Float(float(*x, *y)),
        _ => panic!("mixed numeric modes in scalar arithmetic"),
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        binop(self, rhs, |a, b| a + b, |a, b| a + b)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        binop(self, rhs, |a, b| a - b, |a, b| a - b)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        binop(self, rhs, |a, b| a * b, |a, b| a * b)
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        binop(self, rhs, |a, b| a / b, |a, b| a / b)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Float(a), Scalar::Float(b)) => a == b,
            _ => false,
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.partial_cmp(b),
            (Scalar::Float(a), Scalar::Float(b)) => a.partial_cmp(b),
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_is_closed() {
        let a = Scalar::from_ratio(1, 3);
        let b = Scalar::from_ratio(1, 6);
        assert_eq!(&a + &b, Scalar::from_ratio(1, 2));
        assert_eq!(&a - &b, Scalar::from_ratio(1, 6));
        assert_eq!(&a * &b, Scalar::from_ratio(1, 18));
        assert_eq!(&a / &b, Scalar::from_int(2));
    }

    #[test]
    fn float_tolerance_comparison() {
        let a = Scalar::from_f64(1.0);
        let b = Scalar::from_f64(1.0 + 5e-10);
        assert!(a.approx_eq(&b, DEFAULT_TOL));
        assert!(!a.approx_eq(&Scalar::from_f64(1.0 + 2e-9), DEFAULT_TOL));
    }

    #[test]
    #[should_panic(expected = "mixed numeric modes")]
    fn mixing_modes_panics() {
        let _ = &Scalar::from_int(1) + &Scalar::from_f64(1.0);
    }

    #[test]
    fn metric_pow_keeps_zero_diagonal() {
        assert_eq!(Scalar::from_int(0).metric_pow(0.0), 0.0);
        assert_eq!(Scalar::from_int(2).metric_pow(0.0), 1.0);
        assert!((Scalar::from_int(2).metric_pow(1.5) - 2f64.powf(1.5)).abs() < 1e-15);
    }

    #[test]
    fn display_rationals_and_floats() {
        assert_eq!(Scalar::from_ratio(-2, 4).to_string(), "-1/2");
        assert_eq!(Scalar::from_int(7).to_string(), "7");
        assert_eq!(Scalar::from_f64(2.5).to_string(), "2.5");
    }
}
