//! Arithmetic in the quotients `O_K/P^m`.
//!
//! Three encodings cover every case that occurs:
//!
//! * degree-one unramified primes: `O_K/P^m ≅ Z/p^m` through `ω ↦ t_m`;
//! * inert primes: `P^m = (p^m)`, so residues are coordinate pairs mod `p^m`;
//! * ramified primes: `O_K/P` is `Z/p` through `ω ↦ t`, and `P² = (p)` makes
//!   `O_K/P²` the pairs mod `p`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::ideals::{element_valuation, lift_root, IdealError, PrimeIdeal, SplitKind};
use crate::qfield::BasisKind;
use crate::QuadInt;

/// Canonical residue of an element modulo `P^m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Residue {
    Scalar(#[serde(with = "crate::json::bigint")] BigInt),
    Pair(
        #[serde(with = "crate::json::bigint")] BigInt,
        #[serde(with = "crate::json::bigint")] BigInt,
    ),
}

#[derive(Clone, Debug)]
enum Encoding {
    /// `x + y·ω ↦ x + y·root (mod modulus)`
    Scalar { root: BigInt },
    /// `O_K/(modulus)`, coordinates reduced separately.
    Pair { basis: BasisKind, c: BigInt },
}

/// The ring `O_K/P^m` together with its canonical encoding.
#[derive(Clone, Debug)]
pub struct ResidueRing {
    prime: PrimeIdeal,
    m: u32,
    modulus: BigInt,
    enc: Encoding,
}

impl ResidueRing {
    /// Ramified primes support `m ∈ {1, 2}`; every other kind accepts any `m ≥ 1`.
    pub fn new(prime: &PrimeIdeal, m: u32) -> Result<Self, IdealError> {
        let unsupported = || IdealError::UnsupportedPower { prime: prime.clone(), m };
        if m == 0 {
            return Err(unsupported());
        }
        let p = prime.p().clone();
        let pair = || {
            let field = prime.field();
            let basis = field.basis().expect("quadratic field");
            let d = BigInt::from(field.d().expect("quadratic field"));
            let c = match basis {
                BasisKind::Sqrt => d,
                BasisKind::Half => (1 + d) / 4,
            };
            Encoding::Pair { basis, c }
        };
        let (modulus, enc) = match prime.kind() {
            SplitKind::Rational => (p.pow(m), Encoding::Scalar { root: BigInt::zero() }),
            SplitKind::Split => (p.pow(m), Encoding::Scalar { root: lift_root(prime, m) }),
            SplitKind::Inert => (p.pow(m), pair()),
            SplitKind::Ramified => match m {
                1 => (p, Encoding::Scalar { root: prime.t().expect("ramified root").clone() }),
                2 => (p, pair()),
                _ => return Err(unsupported()),
            },
        };
        Ok(ResidueRing { prime: prime.clone(), m, modulus, enc })
    }

    pub fn prime(&self) -> &PrimeIdeal {
        &self.prime
    }

    pub fn power(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn reduce(&self, a: &QuadInt) -> Residue {
        let n = &self.modulus;
        match &self.enc {
            Encoding::Scalar { root } => Residue::Scalar((a.x() + a.y() * root).mod_floor(n)),
            Encoding::Pair { .. } => Residue::Pair(a.x().mod_floor(n), a.y().mod_floor(n)),
        }
    }

    pub fn one(&self) -> Residue {
        match &self.enc {
            Encoding::Scalar { .. } => Residue::Scalar(BigInt::one() % &self.modulus),
            Encoding::Pair { .. } => Residue::Pair(BigInt::one() % &self.modulus, BigInt::zero()),
        }
    }

    pub fn mul(&self, a: &Residue, b: &Residue) -> Residue {
        let n = &self.modulus;
        match (&self.enc, a, b) {
            (Encoding::Scalar { .. }, Residue::Scalar(x), Residue::Scalar(y)) => {
                Residue::Scalar((x * y) % n)
            }
            (Encoding::Pair { basis, c }, Residue::Pair(x1, y1), Residue::Pair(x2, y2)) => {
                let yy = y1 * y2;
                let (x, y) = match basis {
                    BasisKind::Sqrt => (x1 * x2 - c * yy, x1 * y2 + x2 * y1),
                    BasisKind::Half => (x1 * x2 - c * &yy, x1 * y2 + x2 * y1 + yy),
                };
                Residue::Pair(x.mod_floor(n), y.mod_floor(n))
            }
            _ => panic!("residue encoding mismatch"),
        }
    }

    pub fn pow(&self, base: &Residue, e: &BigUint) -> Residue {
        let mut acc = self.one();
        let mut b = base.clone();
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = self.mul(&acc, &b);
            }
            if i + 1 < bits {
                b = self.mul(&b, &b);
            }
        }
        acc
    }

    pub fn is_one(&self, r: &Residue) -> bool {
        *r == self.one()
    }

    pub fn is_zero(&self, r: &Residue) -> bool {
        match r {
            Residue::Scalar(x) => x.is_zero(),
            Residue::Pair(x, y) => x.is_zero() && y.is_zero(),
        }
    }

    /// Maps a residue of this ring to `coarser`, which must be `O_K/P^j` for `j ≤ m`.
    pub fn project(&self, r: &Residue, coarser: &ResidueRing) -> Residue {
        assert_eq!(self.prime, coarser.prime, "projection between different primes");
        assert!(coarser.m <= self.m, "projection must lower the power");
        let field = self.prime.field();
        // A scalar residue r stands for the rational integer r itself, which
        // has the same class as the original element.
        let lifted = match r {
            Residue::Scalar(x) => QuadInt::rational(field, x.clone()),
            Residue::Pair(x, y) => QuadInt::new(field, x.clone(), y.clone()).expect("quadratic field"),
        };
        coarser.reduce(&lifted)
    }
}

/// `a^e` in `O_K/P^m`, by square-and-multiply inside the quotient.
pub fn residue_pow(a: &QuadInt, e: &BigUint, prime: &PrimeIdeal, m: u32) -> Result<Residue, IdealError> {
    ensure_unit_mod(a, prime)?;
    let ring = ResidueRing::new(prime, m)?;
    Ok(ring.pow(&ring.reduce(a), e))
}

/// Fails with [`IdealError::ElementInPrime`] when `a ∈ P`.
pub fn ensure_unit_mod(a: &QuadInt, prime: &PrimeIdeal) -> Result<(), IdealError> {
    if a.is_zero() || element_valuation(a, prime)? > 0 {
        return Err(IdealError::ElementInPrime(prime.clone()));
    }
    Ok(())
}
