//! Exact rational helpers shared by every module.
//!
//! Coefficients use arbitrary-precision rationals; energy exponents use
//! machine-sized rationals since they only ever add.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational coefficient.
pub type Q = BigRational;

/// Exponent of the formal variable `T`.
pub type Energy = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalParseError {
    #[error("empty rational")]
    Empty,
    #[error("malformed rational {0:?} (expected \"p\" or \"p/q\")")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

fn is_integer_literal(s: &str) -> bool {
    let digits = s.strip_prefix('-').unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

fn split_fraction(s: &str) -> Result<(&str, Option<&str>), RationalParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(RationalParseError::Empty);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    if !is_integer_literal(num) {
        return Err(RationalParseError::Malformed(s.to_string()));
    }
    if let Some(d) = den {
        if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
            return Err(RationalParseError::Malformed(s.to_string()));
        }
    }
    Ok((num, den))
}

/// Parses `"p"` or `"p/q"` (no decimals, no exponent notation).
pub fn parse_q(s: &str) -> Result<Q, RationalParseError> {
    let (num, den) = split_fraction(s)?;
    let n: BigInt = num.parse().map_err(|_| RationalParseError::Malformed(s.to_string()))?;
    let d: BigInt = match den {
        Some(d) => d.parse().map_err(|_| RationalParseError::Malformed(s.to_string()))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(RationalParseError::ZeroDenominator(s.to_string()));
    }
    Ok(Q::new(n, d))
}

pub fn parse_energy(s: &str) -> Result<Energy, RationalParseError> {
    let (num, den) = split_fraction(s)?;
    let n: i64 = num.parse().map_err(|_| RationalParseError::Malformed(s.to_string()))?;
    let d: i64 = match den {
        Some(d) => d.parse().map_err(|_| RationalParseError::Malformed(s.to_string()))?,
        None => 1,
    };
    if d == 0 {
        return Err(RationalParseError::ZeroDenominator(s.to_string()));
    }
    Ok(Energy::new(n, d))
}

/// Canonical rendering: `"p"` for integers, `"p/q"` otherwise.
pub fn format_q(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn format_energy(e: &Energy) -> String {
    if *e.denom() == 1 {
        e.numer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Exact square root of a non-negative rational, when it exists.
pub fn q_sqrt_exact(q: &Q) -> Option<Q> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

pub fn q_to_f64(q: &Q) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        // Very large numerators or denominators: scale down first.
        let n = q.numer().to_f64().unwrap_or(f64::MAX);
        let d = q.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}
