//! Exact rational scalars.
//!
//! Every coefficient-level quantity in this crate is an arbitrary-precision
//! rational. Equality and sign tests are exact; floating point only enters
//! at the sweep/rendering boundary via [`to_f64`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational number, kept in canonical reduced form with a positive
/// denominator (maintained by `BigRational` itself).
pub type Scalar = BigRational;

/// Errors raised when reading a scalar from text.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScalarParseError {
    #[error("empty numeric literal")]
    Empty,
    #[error("invalid numeric literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Shorthand for a small integer scalar.
pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// Shorthand for a small ratio `n/d`.
///
/// Panics on `d == 0`; intended for literals in code and tests.
pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"`, `"p/q"`, or a decimal like `"0.25"` into an exact rational.
///
/// Decimals are scaled by the matching power of ten, so `"0.1"` becomes
/// exactly `1/10`.
pub fn parse_scalar(text: &str) -> Result<Scalar, ScalarParseError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ScalarParseError::Empty);
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = parse_decimal(num.trim())?;
        let d = parse_decimal(den.trim())?;
        if d.is_zero() {
            return Err(ScalarParseError::ZeroDenominator(s.to_string()));
        }
        return Ok(n / d);
    }
    parse_decimal(s)
}

fn parse_decimal(text: &str) -> Result<Scalar, ScalarParseError> {
    if text.is_empty() {
        return Err(ScalarParseError::Empty);
    }
    let (sign, digits) = match text.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(ScalarParseError::Invalid(text.to_string()));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(ScalarParseError::Invalid(text.to_string()));
    }
    let mut numer: BigInt = if int_part.is_empty() {
        BigInt::zero()
    } else {
        int_part
            .parse()
            .map_err(|_| ScalarParseError::Invalid(text.to_string()))?
    };
    let mut denom = BigInt::from(1);
    for c in frac_part.chars() {
        numer = numer * 10 + (c as u8 - b'0');
        denom *= 10;
    }
    Ok(Scalar::new(BigInt::from(sign) * numer, denom))
}

/// Formats a scalar as `"p"` or `"p/q"`. Round-trips through [`parse_scalar`].
pub fn format_scalar(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Nearest-double conversion for sweep evaluation and rendering.
pub fn to_f64(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of leading digits for extreme magnitudes.
        let n = x.numer().to_f64().unwrap_or(f64::MAX * x.numer().signum().to_f64().unwrap());
        let d = x.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// Sign as -1, 0, or +1.
pub fn sign(x: &Scalar) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}
