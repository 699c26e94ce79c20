//! Working precision and small helpers around [`rug::Float`].

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

/// Extended-precision real used throughout the crate.
pub type Real = Float;

/// Smallest accepted number of target decimal digits.
pub const MIN_DIGITS: u32 = 15;

pub const DEFAULT_DIGITS: u32 = 50;

/// Extra bits carried beyond the target so that truncation and rounding
/// budgets never meet at the last requested digit.
const GUARD_BITS: u32 = 64;

/// Target precision of a constants computation.
///
/// Every truncated series in the crate is cut once its certified remainder is
/// below `series_abs_tol() = 10^-(digits + 5)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Precision {
    decimal_digits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            decimal_digits: DEFAULT_DIGITS,
        }
    }
}

impl Precision {
    pub fn new(decimal_digits: u32) -> Result<Self> {
        if decimal_digits < MIN_DIGITS {
            return Err(Error::Config(format!(
                "precision must be at least {MIN_DIGITS} decimal digits, got {decimal_digits}"
            )));
        }
        if decimal_digits > 10_000 {
            return Err(Error::Resource(format!(
                "{decimal_digits} decimal digits is beyond the supported range"
            )));
        }
        Ok(Precision { decimal_digits })
    }

    pub fn digits(&self) -> u32 {
        self.decimal_digits
    }

    /// Binary working precision: enough for `digits + 5` decimal digits plus guard bits.
    pub fn bits(&self) -> u32 {
        bits_for_digits(self.decimal_digits + 5) + GUARD_BITS
    }

    /// `10^-(digits + 5)`.
    pub fn series_abs_tol(&self) -> Real {
        pow10(self.bits(), -(self.decimal_digits as i32 + 5))
    }

    /// `log2` of the tolerance, rounded down; handy for term-count estimates.
    pub fn tol_log2(&self) -> i64 {
        -(bits_for_digits(self.decimal_digits + 5) as i64)
    }
}

pub(crate) fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32
}

pub fn real(bits: u32, v: impl Into<f64>) -> Real {
    Float::with_val(bits, v.into())
}

pub fn int(bits: u32, v: i64) -> Real {
    Float::with_val(bits, v)
}

pub fn pow10(bits: u32, e: i32) -> Real {
    Float::with_val(bits, 10).pow(e)
}

pub fn euler_gamma(bits: u32) -> Real {
    Float::with_val(bits, Constant::Euler)
}

pub fn ln2(bits: u32) -> Real {
    Float::with_val(bits, Constant::Log2)
}

pub fn factorial(bits: u32, n: u32) -> Real {
    Float::with_val(bits, Float::factorial(n))
}

pub fn binomial(bits: u32, n: u32, k: u32) -> Real {
    if k > n {
        return Float::with_val(bits, 0);
    }
    let v = rug::Integer::from(rug::Integer::binomial_u(n, k));
    Float::with_val(bits, &v)
}

/// Formats a real with `digits` significant decimal digits in scientific notation.
pub fn to_decimal(x: &Real, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits.max(1)))
}

/// Parses a decimal string into a real of the given precision.
pub fn parse_decimal(bits: u32, s: &str) -> Result<Real> {
    let s = s.trim();
    if s.is_empty() || s.len() > 4096 {
        return Err(Error::Parse(format!("not a decimal number: {s:?}")));
    }
    let valid = s
        .bytes()
        .all(|b| b.is_ascii_digit() || matches!(b, b'+' | b'-' | b'.' | b'e' | b'E'));
    if !valid {
        return Err(Error::Parse(format!("not a decimal number: {s:?}")));
    }
    let parsed = Float::parse(s).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    let v = Float::with_val(bits, parsed);
    if !v.is_finite() {
        return Err(Error::Parse(format!("non-finite value: {s:?}")));
    }
    Ok(v)
}

/// `0.5 · 10^(e − digits after the point)` for a plain decimal literal: the
/// rounding radius of a printed value.
pub fn printed_half_ulp(bits: u32, s: &str) -> Result<Real> {
    let s = s.trim();
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], &s[i + 1..]),
        None => (s, "0"),
    };
    let e: i32 = exp
        .parse()
        .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
    let after = mant.find('.').map_or(0, |i| mant.len() - i - 1) as i32;
    let p = e
        .checked_sub(after)
        .filter(|p| p.abs() < 10_000)
        .ok_or_else(|| Error::Parse(format!("exponent out of range in {s:?}")))?;
    Ok(Float::with_val(bits, 10).pow(p) / 2u32)
}
