//! Exact rational arithmetic helpers.
//!
//! All utilities and potential values in this crate are exact rationals;
//! comparisons never go through floating point. Values print as `p/q`, or as
//! a bare integer when the denominator is 1.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::str::FromStr;
use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational `{input}`: {reason}")]
pub struct RationalParseError {
    pub input: String,
    pub reason: String,
}

pub fn rational_int(value: i64) -> Rational {
    Rational::from(BigInt::from(value))
}

/// Parses an integer (`-3`), a finite decimal (`1.25`), or a ratio (`5/4`).
pub fn parse_rational(input: &str) -> Result<Rational, RationalParseError> {
    let s = input.trim();
    let err = |reason: &str| RationalParseError {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    if s.is_empty() {
        return Err(err("empty string"));
    }
    if s.contains('/') {
        return Rational::from_str(s).map_err(|e| err(&e.to_string()));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let (sign, int_digits) = match int_part.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, int_part.strip_prefix('+').unwrap_or(int_part)),
        };
        if frac_part.contains(['+', '-']) {
            return Err(err("sign not allowed after the decimal point"));
        }
        if int_digits.is_empty() && frac_part.is_empty() {
            return Err(err("no digits"));
        }
        if !int_digits.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(err("expected decimal digits"));
        }
        let digits = format!("{int_digits}{frac_part}");
        let numer = if digits.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(&digits).map_err(|e| err(&e.to_string()))?
        };
        let mut denom = BigInt::one();
        for _ in 0..frac_part.len() {
            denom *= 10;
        }
        return Ok(Rational::new(BigInt::from(sign) * numer, denom));
    }
    BigInt::from_str(s)
        .map(Rational::from)
        .map_err(|e| err(&e.to_string()))
}

/// Row `m` of Pascal's triangle: `binom(m, 0..=m)`, computed by the additive
/// rule so everything stays exact.
pub(crate) fn pascal_row(m: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for _ in 0..m {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigInt::one());
        for w in row.windows(2) {
            next.push(&w[0] + &w[1]);
        }
        next.push(BigInt::one());
        row = next;
    }
    row
}
