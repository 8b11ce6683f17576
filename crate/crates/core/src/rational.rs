//! Exact rational scalars and their text form.
//!
//! Every coefficient in the crate is a [`Q`]. On the wire a rational is the
//! string `p` or `p/q` matching `-?[0-9]+(/[1-9][0-9]*)?`.

use std::fmt;

use malachite_base::num::arithmetic::traits::{Abs, Pow, Sign};
use malachite_base::num::basic::traits::{One, Zero};
use malachite_base::num::conversion::traits::RoundingFrom;
use malachite_base::rounding_modes::RoundingMode;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use std::cmp::Ordering;

pub use malachite_q::Rational;

/// The scalar field used throughout.
pub type Q = Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {literal:?}: {reason}")]
pub struct ParseRationalError {
    pub literal: String,
    pub reason: &'static str,
}

pub fn zero() -> Q {
    Q::ZERO
}

pub fn one() -> Q {
    Q::ONE
}

pub fn int(n: i64) -> Q {
    Q::from(n)
}

/// `num/den`; panics on a zero denominator.
pub fn frac(num: i64, den: i64) -> Q {
    assert!(den != 0, "zero denominator");
    Q::from_signeds(num, den)
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

pub fn pow(x: &Q, e: u64) -> Q {
    x.pow(e)
}

pub fn is_zero(x: &Q) -> bool {
    x.sign() == Ordering::Equal
}

pub fn is_negative(x: &Q) -> bool {
    x.sign() == Ordering::Less
}

/// Natural logarithm of a positive rational, valid far outside the `f64` range.
pub fn ln(x: &Q) -> f64 {
    assert!(x.sign() == Ordering::Greater, "ln of a non-positive rational");
    x.approx_log()
}

/// Nearest `f64`, saturating to ±inf on overflow.
pub fn to_f64(x: &Q) -> f64 {
    f64::rounding_from(x, RoundingMode::Nearest).0
}

/// Parses the strict wire form `-?[0-9]+(/[1-9][0-9]*)?`.
pub fn parse_rational(s: &str) -> Result<Q, ParseRationalError> {
    let err = |reason| ParseRationalError {
        literal: s.to_string(),
        reason,
    };
    let body = s.strip_prefix('-').unwrap_or(s);
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    if num.is_empty() || !num.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err("numerator must be a non-empty digit string"));
    }
    if let Some(d) = den {
        if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("denominator must be a non-empty digit string"));
        }
        if d.starts_with('0') {
            return Err(err("denominator must start with a non-zero digit"));
        }
    }
    s.parse::<Q>().map_err(|_| err("unparseable"))
}

/// Canonical wire form (`p` or `p/q`, lowest terms).
pub fn format_rational(x: &Q) -> String {
    x.to_string()
}

/// Serde adapter carrying a rational as its wire string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalString(pub Q);

impl From<Q> for RationalString {
    fn from(q: Q) -> Self {
        RationalString(q)
    }
}

impl fmt::Display for RationalString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for RationalString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for RationalString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = RationalString;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational string such as \"-3/4\"")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                parse_rational(v).map(RationalString).map_err(E::custom)
            }
        }
        deserializer.deserialize_str(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_wire_forms() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-6/4").unwrap(), frac(-3, 2));
        assert_eq!(parse_rational("0/7").unwrap(), zero());
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["1/0", "1/05", "", "-", "1/", "/2", "1.5", "+1", "1/-2", " 1"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn format_is_lowest_terms() {
        assert_eq!(format_rational(&frac(4, -6)), "-2/3");
        assert_eq!(format_rational(&int(5)), "5");
    }

    #[test]
    fn ln_handles_huge_values() {
        let big = pow(&int(2), 5000);
        let v = ln(&big);
        assert!((v - 5000.0 * std::f64::consts::LN_2).abs() < 1e-6);
    }
}
