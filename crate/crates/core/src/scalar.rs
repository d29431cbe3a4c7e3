//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(numer: i64, denom: i64) -> Q {
    Q::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn qi(value: i64) -> Q {
    Q::from_integer(BigInt::from(value))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// `[numerator, denominator]` as decimal strings.
pub fn to_json_pair(value: &Q) -> [String; 2] {
    [value.numer().to_string(), value.denom().to_string()]
}

pub fn from_json_pair(pair: &[String; 2]) -> Option<Q> {
    let numer: BigInt = pair[0].parse().ok()?;
    let denom: BigInt = pair[1].parse().ok()?;
    if denom.is_zero() {
        return None;
    }
    Some(Q::new(numer, denom))
}

pub fn abs(value: &Q) -> Q {
    value.abs()
}
