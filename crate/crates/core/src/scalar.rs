//! Arithmetic backends.
//!
//! Everything numeric in the crate is generic over [`Scalar`], implemented
//! for [`BigRational`] (exact, no rounding anywhere) and `f64` (compared
//! against a [`Tolerance`]).

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default tolerance for float mode.
pub const DEFAULT_EPS: f64 = 1e-9;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    /// True for backends that never round.
    const EXACT: bool;

    fn from_int(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_rational(r: &BigRational) -> Self;
    fn to_f64(&self) -> f64;
    /// The exact value, when the backend carries one.
    fn to_rational(&self) -> Option<BigRational>;

    /// Sign of `self`, treating `|self| <= eps` as zero for inexact backends.
    fn sign_within(&self, eps: f64) -> Ordering;

    fn is_zero_within(&self, eps: f64) -> bool {
        self.sign_within(eps) == Ordering::Equal
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
    fn sign_within(&self, _eps: f64) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_rational(&self) -> Option<BigRational> {
        None
    }
    fn sign_within(&self, eps: f64) -> Ordering {
        if *self > eps {
            Ordering::Greater
        } else if *self < -eps {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

/// Comparison tolerance used by float mode; ignored by exact scalars.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps: DEFAULT_EPS }
    }
}

impl Tolerance {
    pub fn new(eps: f64) -> Self {
        Tolerance { eps }
    }

    pub fn sign<S: Scalar>(&self, x: &S) -> Ordering {
        x.sign_within(self.eps)
    }

    pub fn is_zero<S: Scalar>(&self, x: &S) -> bool {
        x.is_zero_within(self.eps)
    }

    pub fn eq<S: Scalar>(&self, a: &S, b: &S) -> bool {
        self.is_zero(&(a.clone() - b.clone()))
    }

    /// `a <= b` up to tolerance.
    pub fn le<S: Scalar>(&self, a: &S, b: &S) -> bool {
        self.sign(&(a.clone() - b.clone())) != Ordering::Greater
    }
}

/// Arithmetic mode selected at run time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(format!("unknown mode `{other}` (expected exact|float)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

/// Parses `p/q`, an integer, or a finite decimal (`0.25`) into an exact
/// fraction. Decimals are read digit by digit, never through `f64`.
pub fn parse_fraction(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().ok()?
        };
        let frac_num: BigInt = frac.parse().ok()?;
        let den = num_traits::pow(BigInt::from(10u32), frac.len());
        let mut value = BigRational::from_integer(int_part.abs()) + BigRational::new(frac_num, den);
        if negative {
            value = -value;
        }
        return Some(value);
    }
    let v: BigInt = text.parse().ok()?;
    Some(BigRational::from_integer(v))
}
