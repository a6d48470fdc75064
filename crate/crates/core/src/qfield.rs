//! Exact arithmetic in rings of integers of imaginary quadratic fields.
//!
//! Elements are stored as coordinates `(x, y)` in the integral basis
//! `{1, ω}`, where `ω = √−d` when `d ≢ 3 (mod 4)` and `ω = (1 + √−d)/2`
//! when `d ≡ 3 (mod 4)`. The ring `Z` is available as a degenerate field
//! (`d = 0`) whose elements always have `y = 0`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Coord;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("d = {0} is not squarefree")]
    NotSquarefree(u64),
    #[error("elements from different fields ({0} and {1})")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("{0} is not divisible by {1}")]
    NotDivisible(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("rational-mode elements must have y = 0")]
    NonzeroY,
    #[error("cannot parse element {0:?}: expected \"x,y\"")]
    Parse(String),
    #[error("coordinate does not fit the scalar type")]
    Overflow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldMode {
    ImaginaryQuadratic,
    Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisKind {
    /// `ω = √−d`
    Sqrt,
    /// `ω = (1 + √−d)/2`
    Half,
}

/// An imaginary quadratic field `Q(√−d)`, or `Q` itself when `d = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    d: u64,
}

/// Serializable summary of a [`FieldSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescription {
    pub mode: FieldMode,
    pub d: Option<u64>,
    pub discriminant: Option<i64>,
    pub basis: Option<BasisKind>,
    pub degree: u32,
    pub min_poly: Option<[i64; 3]>,
}

pub(crate) fn is_squarefree(mut n: u64) -> bool {
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    true
}

impl FieldSpec {
    /// `Q(√−d)` for squarefree `d ≥ 1`; `d = 0` selects rational mode.
    pub fn new(d: u64) -> Result<Self, FieldError> {
        if d == 0 {
            return Ok(Self::rational());
        }
        if !is_squarefree(d) {
            return Err(FieldError::NotSquarefree(d));
        }
        Ok(FieldSpec { d })
    }

    pub const fn rational() -> Self {
        FieldSpec { d: 0 }
    }

    pub const fn gaussian() -> Self {
        FieldSpec { d: 1 }
    }

    pub fn mode(&self) -> FieldMode {
        if self.d == 0 {
            FieldMode::Rational
        } else {
            FieldMode::ImaginaryQuadratic
        }
    }

    pub fn is_rational(&self) -> bool {
        self.d == 0
    }

    pub fn d(&self) -> Option<u64> {
        (self.d != 0).then_some(self.d)
    }

    /// The raw selector used on the command line: `0` for rational mode.
    pub fn selector(&self) -> u64 {
        self.d
    }

    pub fn basis(&self) -> Option<BasisKind> {
        match self.d {
            0 => None,
            d if d % 4 == 3 => Some(BasisKind::Half),
            _ => Some(BasisKind::Sqrt),
        }
    }

    pub fn discriminant(&self) -> Option<i64> {
        match self.basis()? {
            BasisKind::Half => Some(-(self.d as i64)),
            BasisKind::Sqrt => Some(-4 * self.d as i64),
        }
    }

    /// `[K:Q]`.
    pub fn degree(&self) -> u32 {
        if self.d == 0 {
            1
        } else {
            2
        }
    }

    /// Coefficients `[c0, c1, c2]` of the minimal polynomial `c2·X² + c1·X + c0` of `ω`.
    pub fn min_poly(&self) -> Option<[i64; 3]> {
        match self.basis()? {
            BasisKind::Sqrt => Some([self.d as i64, 0, 1]),
            BasisKind::Half => Some([((1 + self.d) / 4) as i64, -1, 1]),
        }
    }

    pub fn describe(&self) -> FieldDescription {
        FieldDescription {
            mode: self.mode(),
            d: self.d(),
            discriminant: self.discriminant(),
            basis: self.basis(),
            degree: self.degree(),
            min_poly: self.min_poly(),
        }
    }

    /// `(1 + d)/4` for the half basis, where `ω² = ω − (1 + d)/4`.
    fn half_constant(&self) -> u64 {
        (1 + self.d) / 4
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.d {
            0 => write!(f, "Q"),
            1 => write!(f, "Q(i)"),
            d => write!(f, "Q(sqrt(-{d}))"),
        }
    }
}

/// Classification of a base element by the size of its norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseClass {
    Zero,
    RootOfUnity,
    /// `0 < Nm(a) < 4`, not a unit: some conjugate has absolute value below 2.
    Small,
    /// Every conjugate has absolute value at least 2.
    Eligible,
}

/// An element `x + y·ω` of the ring of integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadInteger<T> {
    x: T,
    y: T,
    field: FieldSpec,
}

fn from_u64<T: Coord>(v: u64) -> T {
    T::from_u64(v).expect("field constant fits coordinate type")
}

impl<T: Coord> QuadInteger<T> {
    pub fn new(field: FieldSpec, x: T, y: T) -> Result<Self, FieldError> {
        if field.is_rational() && !y.is_zero() {
            return Err(FieldError::NonzeroY);
        }
        Ok(QuadInteger { x, y, field })
    }

    pub fn from_i64(field: FieldSpec, x: i64, y: i64) -> Result<Self, FieldError> {
        let x = T::from_i64(x).ok_or(FieldError::Overflow)?;
        let y = T::from_i64(y).ok_or(FieldError::Overflow)?;
        Self::new(field, x, y)
    }

    /// Embeds a rational integer.
    pub fn rational(field: FieldSpec, x: T) -> Self {
        QuadInteger { x, y: T::zero(), field }
    }

    pub fn zero(field: FieldSpec) -> Self {
        Self::rational(field, T::zero())
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::rational(field, T::one())
    }

    /// The basis element `ω`. Rational mode has none.
    pub fn omega(field: FieldSpec) -> Option<Self> {
        (!field.is_rational()).then(|| QuadInteger { x: T::zero(), y: T::one(), field })
    }

    pub fn x(&self) -> &T {
        &self.x
    }

    pub fn y(&self) -> &T {
        &self.y
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero()
    }

    pub fn is_rational_integer(&self) -> bool {
        self.y.is_zero()
    }

    fn check_same_field(&self, other: &Self) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch(self.field, other.field))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_same_field(other)?;
        Ok(QuadInteger {
            x: self.x.clone() + other.x.clone(),
            y: self.y.clone() + other.y.clone(),
            field: self.field,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_same_field(other)?;
        Ok(QuadInteger {
            x: self.x.clone() - other.x.clone(),
            y: self.y.clone() - other.y.clone(),
            field: self.field,
        })
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_same_field(other)?;
        let (x1, y1) = (&self.x, &self.y);
        let (x2, y2) = (&other.x, &other.y);
        let (x, y) = match self.field.basis() {
            None => (x1.clone() * x2.clone(), T::zero()),
            Some(BasisKind::Sqrt) => {
                let d: T = from_u64(self.field.d);
                (
                    x1.clone() * x2.clone() - d * y1.clone() * y2.clone(),
                    x1.clone() * y2.clone() + x2.clone() * y1.clone(),
                )
            }
            Some(BasisKind::Half) => {
                let m: T = from_u64(self.field.half_constant());
                let yy = y1.clone() * y2.clone();
                (
                    x1.clone() * x2.clone() - m * yy.clone(),
                    x1.clone() * y2.clone() + x2.clone() * y1.clone() + yy,
                )
            }
        };
        Ok(QuadInteger { x, y, field: self.field })
    }

    /// Image under the nontrivial automorphism (identity in rational mode).
    pub fn conjugate(&self) -> Self {
        let (x, y) = match self.field.basis() {
            None => (self.x.clone(), T::zero()),
            Some(BasisKind::Sqrt) => (self.x.clone(), -self.y.clone()),
            Some(BasisKind::Half) => (self.x.clone() + self.y.clone(), -self.y.clone()),
        };
        QuadInteger { x, y, field: self.field }
    }

    /// `Nm(α) = α·conj(α)`; equal to `x` itself in rational mode.
    pub fn norm(&self) -> T {
        let (x, y) = (&self.x, &self.y);
        match self.field.basis() {
            None => x.clone(),
            Some(BasisKind::Sqrt) => {
                let d: T = from_u64(self.field.d);
                x.clone() * x.clone() + d * y.clone() * y.clone()
            }
            Some(BasisKind::Half) => {
                let m: T = from_u64(self.field.half_constant());
                x.clone() * x.clone() + x.clone() * y.clone() + m * y.clone() * y.clone()
            }
        }
    }

    /// `|Nm(α)|`.
    pub fn abs_norm(&self) -> T {
        self.norm().abs()
    }

    /// The quotient `γ` with `γ·β = self`, failing if `β` does not divide `self`.
    pub fn exact_divide(&self, divisor: &Self) -> Result<Self, FieldError> {
        self.check_same_field(divisor)?;
        if divisor.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let not_divisible = || FieldError::NotDivisible(self.to_string(), divisor.to_string());
        if self.field.is_rational() {
            let (q, r) = self.x.div_rem(&divisor.x);
            if !r.is_zero() {
                return Err(not_divisible());
            }
            return Ok(Self::rational(self.field, q));
        }
        let n = divisor.norm();
        let num = self.multiply(&divisor.conjugate())?;
        let (qx, rx) = num.x.div_rem(&n);
        let (qy, ry) = num.y.div_rem(&n);
        if !rx.is_zero() || !ry.is_zero() {
            return Err(not_divisible());
        }
        Ok(QuadInteger { x: qx, y: qy, field: self.field })
    }

    pub fn divides(&self, other: &Self) -> bool {
        !self.is_zero() && other.exact_divide(self).is_ok()
    }

    /// `α^n` by binary exponentiation.
    pub fn power(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.field);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.multiply(&base).expect("same field");
            }
            n >>= 1;
            if n > 0 {
                base = base.multiply(&base).expect("same field");
            }
        }
        acc
    }

    pub fn is_unit(&self) -> bool {
        self.abs_norm().is_one()
    }

    pub fn classify_base(&self) -> BaseClass {
        let n = self.abs_norm();
        let four: T = from_u64(4);
        if n.is_zero() {
            BaseClass::Zero
        } else if n.is_one() {
            BaseClass::RootOfUnity
        } else if self.field.is_rational() {
            // one embedding: |a| ≥ 2 is all that is needed
            BaseClass::Eligible
        } else if n < four {
            BaseClass::Small
        } else {
            BaseClass::Eligible
        }
    }

    /// Converts the coordinates to another scalar type.
    pub fn convert<U: Coord>(&self) -> Result<QuadInteger<U>, FieldError> {
        let x = self.x.to_bigint().and_then(|v| U::from_big(&v)).ok_or(FieldError::Overflow)?;
        let y = self.y.to_bigint().and_then(|v| U::from_big(&v)).ok_or(FieldError::Overflow)?;
        Ok(QuadInteger { x, y, field: self.field })
    }

    pub fn to_big(&self) -> QuadInteger<BigInt> {
        QuadInteger {
            x: self.x.to_bigint().expect("integer coordinate"),
            y: self.y.to_bigint().expect("integer coordinate"),
            field: self.field,
        }
    }

    /// Parses the textual syntax `"x,y"` (or `"x"` for a rational integer).
    pub fn parse(field: FieldSpec, s: &str) -> Result<Self, FieldError> {
        let err = || FieldError::Parse(s.to_string());
        let mut parts = s.split(',').map(str::trim);
        let x = parts.next().ok_or_else(err)?;
        let y = parts.next().unwrap_or("0");
        if parts.next().is_some() {
            return Err(err());
        }
        let x = BigInt::from_str(x).map_err(|_| err())?;
        let y = BigInt::from_str(y).map_err(|_| err())?;
        let x = T::from_big(&x).ok_or(FieldError::Overflow)?;
        let y = T::from_big(&y).ok_or(FieldError::Overflow)?;
        Self::new(field, x, y)
    }
}

impl<T: Coord> fmt::Display for QuadInteger<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x, self.y)
    }
}

// Operator impls panic on a field mismatch; use the `checked_*` / `multiply`
// methods when mixing fields is possible.
impl<T: Coord> Add for QuadInteger<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(&rhs).expect("field mismatch")
    }
}

impl<T: Coord> Sub for QuadInteger<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(&rhs).expect("field mismatch")
    }
}

impl<T: Coord> Mul for QuadInteger<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.multiply(&rhs).expect("field mismatch")
    }
}

impl<T: Coord> Neg for QuadInteger<T> {
    type Output = Self;
    fn neg(self) -> Self {
        QuadInteger { x: -self.x, y: -self.y, field: self.field }
    }
}

/// JSON shape of an element: `{"d": .., "x": .., "y": ..}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementRecord {
    pub d: u64,
    #[serde(with = "crate::json::bigint")]
    pub x: BigInt,
    #[serde(with = "crate::json::bigint")]
    pub y: BigInt,
}

impl<T: Coord> From<&QuadInteger<T>> for ElementRecord {
    fn from(e: &QuadInteger<T>) -> Self {
        let big = e.to_big();
        ElementRecord { d: e.field.selector(), x: big.x, y: big.y }
    }
}

impl<T: Coord> Serialize for QuadInteger<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ElementRecord::from(self).serialize(s)
    }
}
