//! Exact arithmetic aliases and serialization helpers.
//!
//! All probabilities and determinant values in this crate are
//! arbitrary-precision rationals; all cardinalities are arbitrary-precision
//! non-negative integers. Rationals serialize as `{"num": "...", "den":
//! "..."}` in JSON and as `num/den` in CSV and text, with the denominator
//! always positive and the fraction fully reduced, so parsing is lossless.

use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Exact rational number (reduced, positive denominator).
pub type Rational = BigRational;

/// Exact non-negative integer count.
pub type BigCount = BigUint;

/// Rational from two machine-sized counts.
pub fn ratio_u64(num: u64, den: u64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from two exact counts.
pub fn ratio_counts(num: &BigCount, den: &BigCount) -> Rational {
    assert!(!den.is_zero(), "zero denominator");
    Rational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

/// Canonical `num/den` rendering, e.g. `1/2`, `-3/8`, `0/1`, `1/1`.
pub fn format_ratio(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses the output of [`format_ratio`]. Returns `None` on malformed input.
pub fn parse_ratio(s: &str) -> Option<Rational> {
    let (num, den) = s.split_once('/')?;
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() || den.is_negative() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Serde adapter storing a rational as `{"num": "...", "den": "..."}`.
pub mod ratio_serde {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        num: String,
        den: String,
    }

    /// Serializes `x` as decimal strings to avoid 64-bit overflow.
    pub fn serialize<S: Serializer>(x: &Rational, ser: S) -> Result<S::Ok, S::Error> {
        Repr {
            num: x.numer().to_string(),
            den: x.denom().to_string(),
        }
        .serialize(ser)
    }

    /// Inverse of [`serialize`].
    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rational, D::Error> {
        let repr = Repr::deserialize(de)?;
        let num: BigInt = repr.num.parse().map_err(D::Error::custom)?;
        let den: BigInt = repr.den.parse().map_err(D::Error::custom)?;
        if den.is_zero() || den.is_negative() {
            return Err(D::Error::custom("denominator must be positive"));
        }
        Ok(Rational::new(num, den))
    }
}

/// Rational one.
pub fn one() -> Rational {
    Rational::one()
}

/// Rational zero.
pub fn zero() -> Rational {
    Rational::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_and_parse_round_trip() {
        for s in ["1/2", "-3/8", "0/1", "1/1", "123456789123456789123/7"] {
            let x = parse_ratio(s).unwrap();
            assert_eq!(format_ratio(&x), s);
        }
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(parse_ratio("1").is_none());
        assert!(parse_ratio("1/0").is_none());
        assert!(parse_ratio("1/-2").is_none());
        assert!(parse_ratio("a/b").is_none());
    }

    #[test]
    fn reduction_is_canonical() {
        let x = ratio_u64(4, 8);
        assert_eq!(format_ratio(&x), "1/2");
    }
}
