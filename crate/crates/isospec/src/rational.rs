//! Arbitrary-precision rational numbers and small integer helpers.
//!
//! `Rational` values are always stored in lowest terms with a positive
//! denominator; the wire format is the pair of decimal integer strings
//! joined by `/`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer part in rational literal: {0:?}")]
    BadInteger(String),
    #[error("denominator must be a positive integer, got {0:?}")]
    BadDenominator(String),
    #[error("rational literal has more than one '/'")]
    TooManySlashes,
}

/// Parses `"num/den"` (or a bare integer) into a reduced rational.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let mut parts = text.split('/');
    let num_str = parts.next().ok_or(ParseRationalError::Empty)?;
    let den_str = parts.next();
    if parts.next().is_some() {
        return Err(ParseRationalError::TooManySlashes);
    }
    let numerator: BigInt = num_str
        .trim()
        .parse()
        .map_err(|_| ParseRationalError::BadInteger(num_str.to_owned()))?;
    let denominator: BigInt = match den_str {
        None => BigInt::one(),
        Some(d) => d
            .trim()
            .parse()
            .map_err(|_| ParseRationalError::BadDenominator(d.to_owned()))?,
    };
    if !denominator.is_positive() {
        return Err(ParseRationalError::BadDenominator(
            den_str.unwrap_or("").to_owned(),
        ));
    }
    Ok(Rational::new(numerator, denominator))
}

/// Formats a rational as `"num/den"`, the inverse of [`parse_rational`].
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn rational_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Binomial coefficient `C(n, k)` as a big integer; zero outside `0..=n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut result = BigInt::one();
    for i in 0..k {
        result = result * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    result
}

/// Truncated value as f64; good enough for reports, never used for decisions.
pub fn rational_to_f64(value: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or_else(|| {
        let scaled = (value * rational_int(1 << 20)).trunc();
        scaled.to_f64().unwrap_or(f64::NAN) / (1u64 << 20) as f64
    })
}
