//! Wieferich and non-Wieferich places of imaginary quadratic rings of integers.
//!
//! The arithmetic in [`qfield`] and [`cyclo`] is generic over the coordinate
//! type (see [`Coord`]); everything that factors ideals works with the
//! big-integer instantiation [`QuadInt`].

pub mod arith;
pub mod cyclo;
pub mod factor;
pub mod ideals;
pub mod json;
pub mod qfield;
pub mod residue;
pub mod scalar;
pub mod verify;
pub mod wieferich;

pub use factor::{integer_factor, FactorBudget, IntegerFactorization};
pub use ideals::{FactoredIdeal, IdealError, PrimeIdeal, SplitKind};
pub use qfield::{BaseClass, BasisKind, FieldError, FieldSpec, QuadInteger};
pub use residue::{residue_pow, Residue, ResidueRing};
pub use scalar::Coord;

/// Quadratic integer with arbitrary-precision coordinates.
pub type QuadInt = QuadInteger<num_bigint::BigInt>;
/// Quadratic integer with `i64` coordinates.
pub type QuadInt64 = QuadInteger<i64>;
/// Quadratic integer with `i128` coordinates.
pub type QuadInt128 = QuadInteger<i128>;
