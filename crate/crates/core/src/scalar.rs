//! Scalar bounds for element coordinates.

use std::fmt::{Debug, Display};

use num_bigint::{BigInt, ToBigInt};
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Integer type usable as a coordinate of a quadratic integer.
///
/// Fixed-width types (`i64`, `i128`) are fine for small experiments; anything
/// that touches `a^n` for moderate `n` should use [`BigInt`].
pub trait Coord:
    Clone + Debug + Display + Integer + Signed + FromPrimitive + ToPrimitive + ToBigInt + Send + Sync
{
    fn from_big(v: &BigInt) -> Option<Self>;
}

impl Coord for BigInt {
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
}

impl Coord for i64 {
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i64()
    }
}

impl Coord for i128 {
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_coord<T: Coord>() {}

    #[test]
    fn standard_types() {
        assert_coord::<i64>();
        assert_coord::<i128>();
        assert_coord::<BigInt>();
    }

    #[test]
    fn from_big_overflow() {
        let big = BigInt::from(i64::MAX) + 1;
        assert_eq!(<i64 as Coord>::from_big(&big), None);
        assert_eq!(<i128 as Coord>::from_big(&big), Some(i64::MAX as i128 + 1));
    }
}
