//! Prime ideals, valuations, and factorizations of principal ideals.
//!
//! A prime of `O_K` is stored as `(p, kind, t)`: the rational prime below it,
//! how `p` splits, and for degree-one primes the residue `t` of `ω`. This is
//! enough to compute valuations of elements and residues modulo prime powers
//! without ever forming ideal generators.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{kronecker_at_prime, mod_inverse, sqrt_mod_prime, valuation_int};
use crate::factor::{integer_factor, FactorBudget};
use crate::qfield::{BasisKind, FieldSpec};
use crate::QuadInt;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdealError {
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("valuation of zero is undefined")]
    ZeroElement,
    #[error("element lies in the prime {0}")]
    ElementInPrime(PrimeIdeal),
    #[error("factorization incomplete: unfactored cofactor {cofactor}")]
    IncompleteFactorization { cofactor: BigUint },
    #[error("prime {prime} belongs to {found}, element to {expected}")]
    FieldMismatch { prime: PrimeIdeal, found: FieldSpec, expected: FieldSpec },
    #[error("residue ring O_K/P^{m} is not supported for {prime}")]
    UnsupportedPower { prime: PrimeIdeal, m: u32 },
}

/// How a rational prime decomposes in `O_K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitKind {
    Split,
    Inert,
    Ramified,
    /// The prime `(p)` of `Z` itself (rational mode).
    Rational,
}

impl SplitKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SplitKind::Split => "split",
            SplitKind::Inert => "inert",
            SplitKind::Ramified => "ramified",
            SplitKind::Rational => "rational",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "split" => Some(SplitKind::Split),
            "inert" => Some(SplitKind::Inert),
            "ramified" => Some(SplitKind::Ramified),
            "rational" => Some(SplitKind::Rational),
            _ => None,
        }
    }
}

/// A nonzero prime ideal of `O_K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    p: BigInt,
    kind: SplitKind,
    t: Option<BigInt>,
    field: FieldSpec,
}

impl PartialOrd for PrimeIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PrimeIdeal {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.p, self.kind, &self.t, self.field.selector()).cmp(&(
            &other.p,
            other.kind,
            &other.t,
            other.field.selector(),
        ))
    }
}

impl PrimeIdeal {
    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn kind(&self) -> SplitKind {
        self.kind
    }

    /// Residue of `ω` modulo this prime, for degree-one primes of a quadratic field.
    pub fn t(&self) -> Option<&BigInt> {
        self.t.as_ref()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Residue degree `f`.
    pub fn residue_degree(&self) -> u32 {
        if self.kind == SplitKind::Inert {
            2
        } else {
            1
        }
    }

    /// `Nm(P) = p^f`.
    pub fn norm(&self) -> BigInt {
        self.p.pow(self.residue_degree())
    }

    pub fn is_ramified(&self) -> bool {
        self.kind == SplitKind::Ramified
    }

    pub fn record(&self, exp: u32) -> PrimeRecord {
        PrimeRecord { p: self.p.clone(), kind: self.kind, t: self.t.clone(), exp }
    }

    /// Rebuilds a prime from its serialized coordinates, checking them.
    pub fn from_parts(
        field: FieldSpec,
        p: &BigInt,
        kind: SplitKind,
        t: Option<&BigInt>,
    ) -> Result<Self, IdealError> {
        primes_above(p, field)?
            .into_iter()
            .find(|q| q.kind == kind && q.t.as_ref() == t)
            .ok_or_else(|| IdealError::NotPrime(p.clone()))
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.t {
            Some(t) => write!(f, "({}, {}, t={})", self.p, self.kind.as_str(), t),
            None => write!(f, "({}, {})", self.p, self.kind.as_str()),
        }
    }
}

/// JSON shape of one factor: `{"p", "kind", "t", "exp"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRecord {
    #[serde(with = "crate::json::bigint")]
    pub p: BigInt,
    pub kind: SplitKind,
    #[serde(with = "crate::json::opt_bigint")]
    pub t: Option<BigInt>,
    pub exp: u32,
}

fn check_prime(p: &BigInt) -> Result<(), IdealError> {
    if crate::arith::is_prime_int(p) {
        Ok(())
    } else {
        Err(IdealError::NotPrime(p.clone()))
    }
}

/// Decomposition type of the rational prime `p`, read off the Kronecker symbol
/// of the discriminant.
pub fn splitting_type(p: &BigInt, field: FieldSpec) -> Result<SplitKind, IdealError> {
    check_prime(p)?;
    let Some(disc) = field.discriminant() else {
        return Ok(SplitKind::Rational);
    };
    Ok(match kronecker_at_prime(disc, p.magnitude()) {
        0 => SplitKind::Ramified,
        1 => SplitKind::Split,
        _ => SplitKind::Inert,
    })
}

/// `f(X)` for the minimal polynomial of `ω`, reduced mod `modulus`.
fn min_poly_eval(field: FieldSpec, x: &BigInt, modulus: &BigInt) -> BigInt {
    let [c0, c1, _] = field.min_poly().expect("quadratic field");
    (x * x + BigInt::from(c1) * x + BigInt::from(c0)).mod_floor(modulus)
}

fn min_poly_derivative(field: FieldSpec, x: &BigInt) -> BigInt {
    let [_, c1, _] = field.min_poly().expect("quadratic field");
    2 * x + BigInt::from(c1)
}

/// Roots of the minimal polynomial of `ω` modulo `p`, ascending.
fn roots_mod_p(field: FieldSpec, p: &BigInt, kind: SplitKind) -> Vec<BigInt> {
    let d = BigInt::from(field.d().expect("quadratic field"));
    let two = BigInt::from(2);
    let pu: &BigUint = p.magnitude();
    let mut roots: Vec<BigInt> = match (field.basis().expect("quadratic field"), kind) {
        (_, SplitKind::Inert) | (_, SplitKind::Rational) => Vec::new(),
        // X² + d is X² (p | d) or (X + 1)² (p = 2, d odd)
        (BasisKind::Sqrt, SplitKind::Ramified) => vec![d.mod_floor(p).mod_floor(&two)],
        (BasisKind::Half, SplitKind::Ramified) => {
            let inv2 = mod_inverse(&two, p).expect("p odd when ramified in the half basis");
            vec![inv2]
        }
        (BasisKind::Sqrt, SplitKind::Split) => {
            let s = BigInt::from_biguint(Sign::Plus, sqrt_mod_prime(&-&d, pu).expect("split prime"));
            vec![s.clone(), (-s).mod_floor(p)]
        }
        (BasisKind::Half, SplitKind::Split) => {
            if *p == two {
                vec![BigInt::zero(), BigInt::one()]
            } else {
                let s = BigInt::from_biguint(Sign::Plus, sqrt_mod_prime(&-&d, pu).expect("split prime"));
                let inv2 = mod_inverse(&two, p).expect("odd");
                vec![((BigInt::one() + &s) * &inv2).mod_floor(p), ((BigInt::one() - &s) * &inv2).mod_floor(p)]
            }
        }
    };
    roots.sort();
    roots.dedup();
    for t in &roots {
        debug_assert!(min_poly_eval(field, t, p).is_zero());
    }
    roots
}

/// The prime ideals above `p`, in canonical order (split primes by ascending `t`).
pub fn primes_above(p: &BigInt, field: FieldSpec) -> Result<Vec<PrimeIdeal>, IdealError> {
    let kind = splitting_type(p, field)?;
    let make = |t: Option<BigInt>| PrimeIdeal { p: p.clone(), kind, t, field };
    Ok(match kind {
        SplitKind::Rational | SplitKind::Inert => vec![make(None)],
        SplitKind::Ramified | SplitKind::Split => {
            let roots = roots_mod_p(field, p, kind);
            assert_eq!(roots.len(), if kind == SplitKind::Split { 2 } else { 1 });
            roots.into_iter().map(|t| make(Some(t))).collect()
        }
    })
}

/// Lifts the residue `t` of `ω` at a degree-one unramified prime to modulus `p^m`.
///
/// Newton steps double the precision each round; the result satisfies the
/// minimal polynomial of `ω` modulo `p^m`.
pub fn lift_root(prime: &PrimeIdeal, m: u32) -> BigInt {
    let t0 = prime.t.clone().expect("degree-one prime");
    let p = &prime.p;
    let field = prime.field;
    let target = p.pow(m);
    let mut t = t0;
    let mut k = 1u32;
    while k < m {
        k = (2 * k).min(m);
        let pk = p.pow(k);
        let f = min_poly_eval(field, &t, &pk);
        let df = min_poly_derivative(field, &t);
        let inv = mod_inverse(&df, &pk).expect("unramified: f'(t) is a unit");
        t = (&t - f * inv).mod_floor(&pk);
    }
    let t = t.mod_floor(&target);
    assert!(min_poly_eval(field, &t, &target).is_zero(), "lifted root fails the minimal polynomial");
    t
}

fn check_field(gamma: &QuadInt, prime: &PrimeIdeal) -> Result<(), IdealError> {
    if gamma.field() != prime.field {
        return Err(IdealError::FieldMismatch {
            prime: prime.clone(),
            found: prime.field,
            expected: gamma.field(),
        });
    }
    Ok(())
}

/// `v_P(γ)` for nonzero `γ`.
pub fn element_valuation(gamma: &QuadInt, prime: &PrimeIdeal) -> Result<u32, IdealError> {
    check_field(gamma, prime)?;
    if gamma.is_zero() {
        return Err(IdealError::ZeroElement);
    }
    let p = prime.p.magnitude();
    if prime.kind == SplitKind::Rational {
        return Ok(valuation_int(gamma.x(), p));
    }
    let total = valuation_int(&gamma.norm(), p);
    Ok(match prime.kind {
        SplitKind::Inert => total / 2,
        SplitKind::Ramified => total,
        SplitKind::Split => {
            if total == 0 {
                return Ok(0);
            }
            let t = lift_root(prime, total);
            let image = gamma.x() + gamma.y() * t;
            if image.is_zero() {
                total
            } else {
                valuation_int(&image, p).min(total)
            }
        }
        SplitKind::Rational => unreachable!(),
    })
}

/// An integral ideal given by its prime factorization.
///
/// Factors are kept sorted with strictly positive exponents; the empty
/// factorization is the unit ideal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FactoredIdeal {
    factors: Vec<(PrimeIdeal, u32)>,
}

impl FactoredIdeal {
    pub fn unit() -> Self {
        Self::default()
    }

    pub fn from_factors<I: IntoIterator<Item = (PrimeIdeal, u32)>>(it: I) -> Self {
        let mut map: BTreeMap<PrimeIdeal, u32> = BTreeMap::new();
        for (p, e) in it {
            if e > 0 {
                *map.entry(p).or_default() += e;
            }
        }
        FactoredIdeal { factors: map.into_iter().collect() }
    }

    pub fn factors(&self) -> &[(PrimeIdeal, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &PrimeIdeal> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent(&self, prime: &PrimeIdeal) -> u32 {
        self.factors
            .binary_search_by(|(p, _)| p.cmp(prime))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn contains(&self, prime: &PrimeIdeal) -> bool {
        self.exponent(prime) > 0
    }

    /// `Nm(I) = Π Nm(P)^e`.
    pub fn norm(&self) -> BigInt {
        self.factors.iter().fold(BigInt::one(), |acc, (p, e)| acc * p.norm().pow(*e))
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }

    pub fn is_powerful(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e >= 2)
    }

    pub fn product(&self, other: &Self) -> Self {
        Self::from_factors(self.factors.iter().chain(other.factors.iter()).cloned())
    }

    /// The ideal sum `I + J`, i.e. the prime-wise minimum of exponents.
    pub fn gcd(&self, other: &Self) -> Self {
        FactoredIdeal {
            factors: self
                .factors
                .iter()
                .filter_map(|(p, e)| {
                    let f = other.exponent(p);
                    (f > 0).then(|| (p.clone(), (*e).min(f)))
                })
                .collect(),
        }
    }

    pub fn radical(&self) -> Self {
        FactoredIdeal { factors: self.factors.iter().map(|(p, _)| (p.clone(), 1)).collect() }
    }

    /// Splits into `(C, D)`: the squarefree part (exponent 1) and the powerful part (exponent ≥ 2).
    pub fn powerful_squarefree_split(&self) -> (Self, Self) {
        let (c, d): (Vec<_>, Vec<_>) = self.factors.iter().cloned().partition(|(_, e)| *e == 1);
        (FactoredIdeal { factors: c }, FactoredIdeal { factors: d })
    }

    pub fn records(&self) -> Vec<PrimeRecord> {
        self.factors.iter().map(|(p, e)| p.record(*e)).collect()
    }

    /// Inverse of [`records`](Self::records).
    pub fn from_records(field: FieldSpec, records: &[PrimeRecord]) -> Result<Self, IdealError> {
        let mut out = Vec::with_capacity(records.len());
        for r in records {
            out.push((PrimeIdeal::from_parts(field, &r.p, r.kind, r.t.as_ref())?, r.exp));
        }
        Ok(Self::from_factors(out))
    }
}

impl Serialize for FactoredIdeal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.records().serialize(s)
    }
}

impl fmt::Display for FactoredIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "(1)");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            write!(f, "{p}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Factors the principal ideal `(γ)` by factoring `|Nm(γ)|` and distributing
/// each rational prime's exponent over the primes above it.
pub fn factor_principal(gamma: &QuadInt, budget: FactorBudget) -> Result<FactoredIdeal, IdealError> {
    if gamma.is_zero() {
        return Err(IdealError::ZeroElement);
    }
    let norm = gamma.abs_norm();
    let fact = integer_factor(norm.magnitude(), budget);
    if let Some(cofactor) = fact.cofactor {
        return Err(IdealError::IncompleteFactorization { cofactor });
    }
    let mut out = Vec::new();
    for (p, e) in fact.factors {
        let p = BigInt::from_biguint(Sign::Plus, p);
        let mut accounted = 0;
        for prime in primes_above(&p, gamma.field())? {
            let v = element_valuation(gamma, &prime)?;
            accounted += v * prime.residue_degree();
            out.push((prime, v));
        }
        assert_eq!(accounted, e, "valuations at {p} do not account for Nm(γ)");
    }
    let ideal = FactoredIdeal::from_factors(out);
    assert_eq!(ideal.norm(), norm, "factorization norm mismatch");
    Ok(ideal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::QuadInt;
    use proptest::prelude::*;

    fn gauss() -> FieldSpec {
        FieldSpec::gaussian()
    }

    fn g(x: i64, y: i64) -> QuadInt {
        QuadInt::from_i64(gauss(), x, y).unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn prime(p: i64, field: FieldSpec, idx: usize) -> PrimeIdeal {
        primes_above(&big(p), field).unwrap()[idx].clone()
    }

    #[test]
    fn splitting_examples() {
        assert_eq!(splitting_type(&big(5), gauss()).unwrap(), SplitKind::Split);
        assert_eq!(splitting_type(&big(2), gauss()).unwrap(), SplitKind::Ramified);
        assert_eq!(splitting_type(&big(3), gauss()).unwrap(), SplitKind::Inert);
        let f3 = FieldSpec::new(3).unwrap();
        assert_eq!(splitting_type(&big(5), f3).unwrap(), SplitKind::Inert);
        assert_eq!(splitting_type(&big(3), f3).unwrap(), SplitKind::Ramified);
        assert_eq!(splitting_type(&big(7), f3).unwrap(), SplitKind::Split);
        let f7 = FieldSpec::new(7).unwrap();
        assert_eq!(splitting_type(&big(2), f7).unwrap(), SplitKind::Split);
        assert_eq!(splitting_type(&big(6), gauss()), Err(IdealError::NotPrime(big(6))));
    }

    #[test]
    fn primes_above_examples() {
        let ps = primes_above(&big(5), gauss()).unwrap();
        assert_eq!(ps.len(), 2);
        assert_eq!(ps[0].t(), Some(&big(2)));
        assert_eq!(ps[1].t(), Some(&big(3)));
        let ps = primes_above(&big(2), gauss()).unwrap();
        assert_eq!((ps.len(), ps[0].kind(), ps[0].t()), (1, SplitKind::Ramified, Some(&big(1))));
        let ps = primes_above(&big(3), gauss()).unwrap();
        assert_eq!((ps.len(), ps[0].kind(), ps[0].norm()), (1, SplitKind::Inert, big(9)));
        assert!(primes_above(&big(9), gauss()).is_err());
    }

    #[test]
    fn roots_satisfy_min_poly_everywhere() {
        for d in [1u64, 2, 3, 5, 6, 7, 11, 15, 19, 23, 43] {
            let f = FieldSpec::new(d).unwrap();
            for p in crate::arith::primes_up_to(300) {
                let p = big(p as i64);
                let ps = primes_above(&p, f).unwrap();
                let kind = ps[0].kind();
                let expected = match kind {
                    SplitKind::Split => 2,
                    _ => 1,
                };
                assert_eq!(ps.len(), expected);
                for q in &ps {
                    if let Some(t) = q.t() {
                        assert!(min_poly_eval(f, t, &p).is_zero(), "d={d} p={p}");
                    }
                }
                if kind == SplitKind::Split {
                    assert!(ps[0].t() < ps[1].t());
                    for m in 1..6 {
                        let pm = p.pow(m);
                        let t = lift_root(&ps[0], m);
                        assert!(min_poly_eval(f, &t, &pm).is_zero());
                        assert_eq!(t.mod_floor(&p), ps[0].t().unwrap().clone());
                    }
                }
            }
        }
    }

    #[test]
    fn valuation_examples() {
        let ram = prime(2, gauss(), 0);
        assert_eq!(element_valuation(&g(2, 4), &ram).unwrap(), 2);
        let p5a = prime(5, gauss(), 0);
        let p5b = prime(5, gauss(), 1);
        assert_eq!(element_valuation(&g(2, -1), &p5a).unwrap(), 1);
        assert_eq!(element_valuation(&g(2, -1), &p5b).unwrap(), 0);
        for u in [g(1, 0), g(-1, 0), g(0, 1), g(0, -1)] {
            for p in [&ram, &p5a, &p5b] {
                assert_eq!(element_valuation(&u, p).unwrap(), 0);
            }
        }
        assert_eq!(element_valuation(&g(0, 0), &ram), Err(IdealError::ZeroElement));
        // 125 = (2+i)^3 (2-i)^3 exactly
        assert_eq!(element_valuation(&g(125, 0), &p5a).unwrap(), 3);
        assert_eq!(element_valuation(&g(2, 1).power(7), &p5b).unwrap(), 7);
        assert_eq!(element_valuation(&g(2, 1).power(7), &p5a).unwrap(), 0);
    }

    #[test]
    fn factor_principal_examples() {
        let b = FactorBudget::default();
        let f = factor_principal(&g(2, 4), b).unwrap();
        assert_eq!(f.factors(), &[(prime(2, gauss(), 0), 2), (prime(5, gauss(), 0), 1)]);
        assert!(factor_principal(&g(0, -1), b).unwrap().is_unit());
        let f = factor_principal(&g(12, 0), b).unwrap();
        assert_eq!(f.factors(), &[(prime(2, gauss(), 0), 4), (prime(3, gauss(), 0), 1)]);
        assert_eq!(factor_principal(&g(0, 0), b), Err(IdealError::ZeroElement));
    }

    #[test]
    fn incomplete_factorization_is_reported() {
        let b = FactorBudget::new(10, 10).unwrap();
        // (1000000007)(1000000009) rational, both ≡ 3 mod 4 is not needed
        let n = QuadInt::rational(gauss(), big(1_000_000_007) * big(1_000_000_021));
        assert!(matches!(factor_principal(&n, b), Err(IdealError::IncompleteFactorization { .. })));
    }

    #[test]
    fn split_gcd_radical_examples() {
        let ram = prime(2, gauss(), 0);
        let p5 = prime(5, gauss(), 0);
        let f = FactoredIdeal::from_factors([(ram.clone(), 2), (p5.clone(), 1)]);
        let (c, d) = f.powerful_squarefree_split();
        assert_eq!(c, FactoredIdeal::from_factors([(p5.clone(), 1)]));
        assert_eq!(d, FactoredIdeal::from_factors([(ram.clone(), 2)]));
        let sq = FactoredIdeal::from_factors([(ram.clone(), 1), (p5.clone(), 1)]);
        assert_eq!(sq.powerful_squarefree_split(), (sq.clone(), FactoredIdeal::unit()));
        assert_eq!(FactoredIdeal::unit().powerful_squarefree_split(), (FactoredIdeal::unit(), FactoredIdeal::unit()));

        let r = f.radical();
        assert_eq!(r, sq);
        assert_eq!(r.norm(), big(10));
        assert_eq!(sq.radical(), sq);
        assert!(FactoredIdeal::unit().radical().is_unit());

        // (1+i)(2-i) + (2-i) = (2-i)
        let b = FactorBudget::default();
        let lhs = factor_principal(&(g(1, 1) * g(2, -1)), b).unwrap();
        let rhs = factor_principal(&g(2, -1), b).unwrap();
        assert_eq!(lhs.gcd(&rhs), rhs);
        assert!(f.gcd(&FactoredIdeal::unit()).is_unit());
        assert_eq!(f.gcd(&f), f);
    }

    #[test]
    fn json_shape() {
        let f = factor_principal(&g(2, 4), FactorBudget::default()).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(
            s,
            r#"[{"p":2,"kind":"ramified","t":1,"exp":2},{"p":5,"kind":"split","t":2,"exp":1}]"#
        );
        let recs: Vec<PrimeRecord> = serde_json::from_str(&s).unwrap();
        assert_eq!(FactoredIdeal::from_records(gauss(), &recs).unwrap(), f);
    }

    fn fields() -> impl Strategy<Value = FieldSpec> {
        prop_oneof![
            Just(FieldSpec::new(1).unwrap()),
            Just(FieldSpec::new(2).unwrap()),
            Just(FieldSpec::new(3).unwrap()),
            Just(FieldSpec::new(5).unwrap()),
            Just(FieldSpec::new(7).unwrap()),
            Just(FieldSpec::new(15).unwrap()),
            Just(FieldSpec::rational()),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn valuations_account_for_norm(f in fields(), x in -3000i64..3000, y in -3000i64..3000) {
            let y = if f.is_rational() { 0 } else { y };
            let gamma = QuadInt::from_i64(f, x, y).unwrap();
            prop_assume!(!gamma.is_zero());
            let fac = factor_principal(&gamma, FactorBudget::default()).unwrap();
            prop_assert_eq!(fac.norm(), gamma.abs_norm());
            let (c, d) = fac.powerful_squarefree_split();
            prop_assert!(c.is_squarefree());
            prop_assert!(d.is_powerful());
            prop_assert!(c.gcd(&d).is_unit());
            prop_assert_eq!(c.product(&d), fac.clone());
            // Σ_{P | p} f(P) v_P(γ) = v_p(Nm γ)
            let n = gamma.abs_norm();
            for p in crate::arith::primes_up_to(60) {
                let pb = big(p as i64);
                let total: u32 = primes_above(&pb, f).unwrap().iter()
                    .map(|q| q.residue_degree() * element_valuation(&gamma, q).unwrap()).sum();
                prop_assert_eq!(total, valuation_int(&n, pb.magnitude()));
            }
        }
    }
}
