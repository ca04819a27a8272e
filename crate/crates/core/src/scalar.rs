//! Numeric field abstraction shared by the belief and LP code.
//!
//! Everything that has to be bit-exact (conjugates of rational atoms, the
//! designer LP, zero-sum equilibria) runs over [`BigRational`]; everything
//! that has to be fast runs over `f64`. Both implement [`Scalar`].

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::{BigRational, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    /// Exact for rationals (every finite double is a dyadic rational).
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn abs(&self) -> Self;
    fn is_finite(&self) -> bool;

    /// Pivot / comparison tolerance: zero for exact arithmetic.
    fn eps() -> Self;
    /// Atoms closer than this are merged.
    fn merge_eps() -> Self;
    /// Weights at or below this are dropped.
    fn drop_eps() -> Self;

    fn to_json(&self) -> Value;
    fn from_json(v: &Value, field: &str) -> Result<Self>;

    fn is_zero_tol(&self) -> bool {
        self.abs() <= Self::eps()
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn eps() -> Self {
        1e-11
    }
    fn merge_eps() -> Self {
        1e-12
    }
    fn drop_eps() -> Self {
        1e-15
    }
    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }
    fn from_json(v: &Value, field: &str) -> Result<Self> {
        match v {
            Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Error::parse(field, "not representable as f64")),
            Value::String(s) => parse_rational(s)
                .map(|r| Scalar::to_f64(&r))
                .ok_or_else(|| Error::parse(field, format!("cannot parse `{s}` as a number"))),
            _ => Err(Error::parse(field, "expected a number")),
        }
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        num::One::one()
    }
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite float")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn is_finite(&self) -> bool {
        true
    }
    fn eps() -> Self {
        Zero::zero()
    }
    fn merge_eps() -> Self {
        Zero::zero()
    }
    fn drop_eps() -> Self {
        Zero::zero()
    }
    fn to_json(&self) -> Value {
        Value::String(rational_string(self))
    }
    fn from_json(v: &Value, field: &str) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s)
                .ok_or_else(|| Error::parse(field, format!("cannot parse `{s}` as a rational"))),
            Value::Number(n) => n
                .as_f64()
                .filter(|x| x.is_finite())
                .map(|x| rational_near(x, SNAP_TOL))
                .ok_or_else(|| Error::parse(field, "not a finite number")),
            _ => Err(Error::parse(field, "expected a rational string like \"3/4\"")),
        }
    }
}

/// `"3/4"`, `"-2"`, or a decimal literal like `"0.375"` (read exactly).
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Ok(i) = s.parse::<BigInt>() {
        return Some(BigRational::from_integer(i));
    }
    // exact decimal: "0.375" -> 375/1000
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.')?;
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let den = num::pow(BigInt::from(10), frac_part.len());
    let r = BigRational::new(digits, den);
    Some(if neg { -r } else { r })
}

pub fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// f64 inputs within this distance of a simple rational are read as that rational.
pub const SNAP_TOL: f64 = 1e-12;

/// Simplest rational within `tol` of `x` (continued-fraction convergents).
/// Falls back to the exact binary value if no convergent is close enough.
pub fn rational_near(x: f64, tol: f64) -> BigRational {
    if !x.is_finite() {
        return <BigRational as Zero>::zero();
    }
    let (mut h0, mut h1) = (BigInt::from(0), BigInt::from(1));
    let (mut k0, mut k1) = (BigInt::from(1), BigInt::from(0));
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let approx = BigRational::new(h1.clone(), k1.clone());
        if (ToPrimitive::to_f64(&approx).unwrap_or(f64::NAN) - x).abs() <= tol {
            return approx;
        }
        let frac = rest - a;
        if frac <= 0.0 {
            break;
        }
        rest = 1.0 / frac;
    }
    <BigRational as Scalar>::from_f64(x)
}
