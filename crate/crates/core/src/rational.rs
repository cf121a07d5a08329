//! Exact rational helpers shared by every module.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational used for every coordinate, length and bound.
pub type Q = BigRational;

pub fn q(numer: i64, denom: i64) -> Q {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// `2^-n` as an exact rational.
pub fn pow2_inv(n: u32) -> Q {
    BigRational::new(BigInt::one(), BigInt::one() << n as usize)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

/// Parses `p/q`, `p` or `-p/q`; the result is reduced to lowest terms.
pub fn parse_q(s: &str) -> Result<Q, ParseRationalError> {
    let t = s.trim();
    match BigRational::from_str(t) {
        Ok(v) => Ok(v),
        Err(_) => Err(ParseRationalError(s.to_string())),
    }
}

/// Normalized fraction string: `p/q`, or `p` when the denominator is one.
pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

pub fn min_q<'a>(a: &'a Q, b: &'a Q) -> &'a Q {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn max_q<'a>(a: &'a Q, b: &'a Q) -> &'a Q {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

/// Largest integer `n` with `n <= x`, for nonnegative `x`.
pub fn floor_usize(x: &Q) -> usize {
    let f = x.floor().to_integer();
    usize::try_from(f).unwrap_or(usize::MAX)
}

/// Serde adapter writing a rational as its normalized fraction string.
pub mod serde_q {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}
