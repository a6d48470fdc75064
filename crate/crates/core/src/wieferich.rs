//! Place classification, the squarefree/powerful split of `(a^n − 1)`, and
//! censuses of non-Wieferich places.
//!
//! Levels are the exponents `n` in `a^n − 1`. The factorization of
//! `(a^n − 1)` is assembled from the factorizations of the cyclotomic values
//! `Φ_d(a)` for `d | n`, which are far smaller than `a^n − 1` itself. A level
//! whose factorization does not finish within budget is skipped as a whole.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{is_prime_u64, split_valuation};
use crate::cyclo::{cyclotomic_eval, divisors, CycloError};
use crate::factor::{integer_factor, FactorBudget};
use crate::ideals::{element_valuation, factor_principal, FactoredIdeal, IdealError, PrimeIdeal, PrimeRecord};
use crate::qfield::BaseClass;
use crate::residue::{ensure_unit_mod, residue_pow, ResidueRing};
use crate::QuadInt;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WieferichError {
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error("base {base} is {class:?}: a^n - 1 vanishes for some n")]
    DegenerateBase { base: String, class: BaseClass },
    #[error(
        "base {base} is not admissible for a census: its norm is at most 1, so it belongs to the \
         exception set of elements with Nm(a) <= 3 (0, roots of unity, and the small elements listed by `exceptions`)"
    )]
    IneligibleBase { base: String, class: BaseClass },
    #[error("order of the base modulo {prime} needs a factorization of Nm - 1 that did not finish")]
    OrderUnavailable { prime: PrimeIdeal },
    #[error("{0} is not a prime level")]
    NotPrimeLevel(u64),
    #[error("modulus k must be positive")]
    ZeroModulus,
    #[error("invariant violated: {0}")]
    Invariant(String),
}

fn check_base(a: &QuadInt) -> Result<(), WieferichError> {
    match a.classify_base() {
        c @ (BaseClass::Zero | BaseClass::RootOfUnity) => {
            Err(WieferichError::DegenerateBase { base: a.to_string(), class: c })
        }
        _ => Ok(()),
    }
}

fn to_int(v: BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, v)
}

/// Factors `q − 1` for `q = Nm(P)`, splitting `p² − 1 = (p − 1)(p + 1)` for inert primes.
fn factor_group_order(prime: &PrimeIdeal, budget: FactorBudget) -> Option<Vec<(BigUint, u32)>> {
    let p = prime.p().magnitude();
    let one = BigUint::one();
    let pieces: Vec<BigUint> = if prime.residue_degree() == 2 {
        vec![p - &one, p + &one]
    } else {
        vec![p - &one]
    };
    let mut merged: BTreeMap<BigUint, u32> = BTreeMap::new();
    for piece in pieces {
        if piece.is_zero() {
            continue;
        }
        let f = integer_factor(&piece, budget);
        if !f.is_complete() {
            return None;
        }
        for (l, e) in f.factors {
            *merged.entry(l).or_default() += e;
        }
    }
    Some(merged.into_iter().collect())
}

/// `e_P(a)`: the multiplicative order of `a` in `O_K/P`.
pub fn residue_order(prime: &PrimeIdeal, a: &QuadInt, budget: FactorBudget) -> Result<BigInt, WieferichError> {
    ensure_unit_mod(a, prime)?;
    let group = prime.norm() - 1u32;
    let factors = factor_group_order(prime, budget)
        .ok_or_else(|| WieferichError::OrderUnavailable { prime: prime.clone() })?;
    let ring = ResidueRing::new(prime, 1)?;
    let r = ring.reduce(a);
    let mut order = group.magnitude().clone();
    for (l, e) in factors {
        for _ in 0..e {
            let candidate = &order / &l;
            if ring.is_one(&ring.pow(&r, &candidate)) {
                order = candidate;
            } else {
                break;
            }
        }
    }
    Ok(to_int(order))
}

/// Whether `a^{q−1} ≡ 1 (mod P²)` with `q = Nm(P)`.
pub fn is_wieferich_place(prime: &PrimeIdeal, a: &QuadInt) -> Result<bool, IdealError> {
    let exponent = (prime.norm() - 1u32).magnitude().clone();
    let r = residue_pow(a, &exponent, prime, 2)?;
    Ok(ResidueRing::new(prime, 2)?.is_one(&r))
}

/// Classification of one prime for a fixed base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceReport {
    pub prime: PrimeIdeal,
    pub base: QuadInt,
    pub norm: BigInt,
    /// `None` when `Nm(P) − 1` could not be factored within budget.
    pub order: Option<BigInt>,
    pub wieferich: bool,
}

impl PlaceReport {
    /// Classifies `P` for base `a`; the order is best-effort.
    pub fn classify(prime: &PrimeIdeal, a: &QuadInt, budget: FactorBudget) -> Result<Self, WieferichError> {
        let wieferich = is_wieferich_place(prime, a)?;
        let order = match residue_order(prime, a, budget) {
            Ok(o) => Some(o),
            Err(WieferichError::OrderUnavailable { .. }) => None,
            Err(e) => return Err(e),
        };
        Ok(PlaceReport { prime: prime.clone(), base: a.clone(), norm: prime.norm(), order, wieferich })
    }
}

#[derive(Serialize)]
struct PlaceReportJson<'a> {
    #[serde(flatten)]
    prime: PrimeRecordNoExp,
    base: &'a QuadInt,
    #[serde(with = "crate::json::bigint")]
    norm: BigInt,
    #[serde(with = "crate::json::opt_bigint")]
    order: Option<BigInt>,
    wieferich: bool,
}

#[derive(Serialize)]
struct PrimeRecordNoExp {
    #[serde(with = "crate::json::bigint")]
    p: BigInt,
    kind: crate::ideals::SplitKind,
    #[serde(with = "crate::json::opt_bigint")]
    t: Option<BigInt>,
}

impl From<&PrimeIdeal> for PrimeRecordNoExp {
    fn from(p: &PrimeIdeal) -> Self {
        let PrimeRecord { p, kind, t, .. } = p.record(1);
        PrimeRecordNoExp { p, kind, t }
    }
}

impl Serialize for PlaceReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PlaceReportJson {
            prime: (&self.prime).into(),
            base: &self.base,
            norm: self.norm.clone(),
            order: self.order.clone(),
            wieferich: self.wieferich,
        }
        .serialize(s)
    }
}

/// The split `(a^n − 1) = C·D` with `D` powerful and `C` squarefree, and the
/// parts `C′ = (Φ_n(a)) + C`, `D′ = (Φ_n(a)) + D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CDDecomposition {
    pub n: u64,
    pub base: QuadInt,
    pub c: FactoredIdeal,
    pub d: FactoredIdeal,
    pub cp: FactoredIdeal,
    pub dp: FactoredIdeal,
    pub complete: bool,
}

/// Memoized factorizations of `(Φ_d(a))` for one base.
#[derive(Clone, Debug)]
pub struct CyclotomicFactors {
    base: QuadInt,
    budget: FactorBudget,
    cache: BTreeMap<u64, Option<FactoredIdeal>>,
}

fn factor_cyclotomic(a: &QuadInt, d: u64, budget: FactorBudget) -> Option<FactoredIdeal> {
    let value = cyclotomic_eval(d, a).expect("base checked");
    match factor_principal(&value, budget) {
        Ok(f) => Some(f),
        Err(IdealError::IncompleteFactorization { cofactor }) => {
            log::warn!("Φ_{d}({a}): factorization incomplete, cofactor has {} bits", cofactor.bits());
            None
        }
        Err(e) => panic!("unexpected factorization failure: {e}"),
    }
}

impl CyclotomicFactors {
    pub fn new(base: &QuadInt, budget: FactorBudget) -> Result<Self, WieferichError> {
        check_base(base)?;
        Ok(CyclotomicFactors { base: base.clone(), budget, cache: BTreeMap::new() })
    }

    pub fn base(&self) -> &QuadInt {
        &self.base
    }

    /// Factors every `Φ_d(a)` with `d | n` for `n` in `levels`, in parallel.
    pub fn prefetch<I: IntoIterator<Item = u64>>(&mut self, levels: I) {
        let mut needed: BTreeSet<u64> = BTreeSet::new();
        for n in levels {
            for d in divisors(n).unwrap_or_default() {
                if !self.cache.contains_key(&d) {
                    needed.insert(d);
                }
            }
        }
        let needed: Vec<u64> = needed.into_iter().collect();
        let (a, budget) = (&self.base, self.budget);
        let results: Vec<(u64, Option<FactoredIdeal>)> =
            needed.par_iter().map(|&d| (d, factor_cyclotomic(a, d, budget))).collect();
        self.cache.extend(results);
    }

    /// Factorization of `(Φ_d(a))`, or `None` if it did not finish.
    pub fn phi(&mut self, d: u64) -> Option<FactoredIdeal> {
        if !self.cache.contains_key(&d) {
            let f = factor_cyclotomic(&self.base, d, self.budget);
            self.cache.insert(d, f);
        }
        self.cache[&d].clone()
    }

    /// Factorization of `(a^n − 1) = Π_{d|n} (Φ_d(a))`.
    pub fn power_minus_one(&mut self, n: u64) -> Option<FactoredIdeal> {
        let mut acc = FactoredIdeal::unit();
        for d in divisors(n).ok()? {
            acc = acc.product(&self.phi(d)?);
        }
        Some(acc)
    }

    pub fn decompose(&mut self, n: u64) -> Result<CDDecomposition, WieferichError> {
        if n == 0 {
            return Err(CycloError::ZeroArgument.into());
        }
        let base = self.base.clone();
        let (Some(full), Some(phi)) = (self.power_minus_one(n), self.phi(n)) else {
            log::info!("level {n} skipped: factorization incomplete");
            let e = FactoredIdeal::unit();
            return Ok(CDDecomposition {
                n,
                base,
                c: e.clone(),
                d: e.clone(),
                cp: e.clone(),
                dp: e,
                complete: false,
            });
        };
        let (c, d) = full.powerful_squarefree_split();
        let cp = phi.gcd(&c);
        let dp = phi.gcd(&d);
        if cp.product(&dp) != phi || !c.is_squarefree() || !d.is_powerful() {
            return Err(WieferichError::Invariant(format!("C/D split inconsistent at level {n}")));
        }
        Ok(CDDecomposition { n, base, c, d, cp, dp, complete: true })
    }
}

/// `C_{n,a}`, `D_{n,a}`, `C′_{n,a}`, `D′_{n,a}`.
pub fn cd_decompose(n: u64, a: &QuadInt, budget: FactorBudget) -> Result<CDDecomposition, WieferichError> {
    CyclotomicFactors::new(a, budget)?.decompose(n)
}

/// `C′_{n,a}` from the factorization of `Φ_n(a)` alone.
///
/// A prime of `(Φ_n(a))` lies in `C_{n,a}` exactly when its valuation in
/// `a^n − 1` is one, so the other cyclotomic factors never need factoring.
pub fn cprime_part(n: u64, a: &QuadInt, budget: FactorBudget) -> Result<Option<FactoredIdeal>, WieferichError> {
    check_base(a)?;
    let phi = cyclotomic_eval(n, a)?;
    let phi_f = match factor_principal(&phi, budget) {
        Ok(f) => f,
        Err(IdealError::IncompleteFactorization { .. }) => {
            log::info!("level {n} skipped: Φ_{n}(a) not factored within budget");
            return Ok(None);
        }
        Err(e) => return Err(e.into()),
    };
    let full = a.power(n) - QuadInt::one(a.field());
    let mut out = Vec::new();
    for p in phi_f.primes() {
        if element_valuation(&full, p)? == 1 {
            out.push((p.clone(), 1));
        }
    }
    Ok(Some(FactoredIdeal::from_factors(out)))
}

/// Every prime of `C_{n,a}` with its classification.
///
/// Each prime is tested directly with [`is_wieferich_place`]; a Wieferich
/// prime inside `C_{n,a}` is reported as an invariant violation. Levels whose
/// factorization is incomplete yield an empty list.
pub fn nonwieferich_from_cn(n: u64, a: &QuadInt, budget: FactorBudget) -> Result<Vec<PlaceReport>, WieferichError> {
    let cd = cd_decompose(n, a, budget)?;
    places_of_c(&cd, budget)
}

pub(crate) fn places_of_c(cd: &CDDecomposition, budget: FactorBudget) -> Result<Vec<PlaceReport>, WieferichError> {
    if !cd.complete {
        log::warn!("level {} skipped: incomplete factorization", cd.n);
        return Ok(Vec::new());
    }
    let mut out = Vec::with_capacity(cd.c.len());
    for p in cd.c.primes() {
        let report = PlaceReport::classify(p, &cd.base, budget)?;
        if report.wieferich {
            return Err(WieferichError::Invariant(format!(
                "{p} divides C_{{{},{}}} but is a Wieferich place",
                cd.n, cd.base
            )));
        }
        out.push(report);
    }
    Ok(out)
}

/// First-occurrence bookkeeping for prime levels `k·q`.
#[derive(Clone, Debug)]
pub struct NewPrimeState {
    base: QuadInt,
    k: u64,
    budget: FactorBudget,
    /// `m ↦` primes of `C′_{km,a}`, `None` for a skipped level.
    levels: BTreeMap<u64, Option<Vec<PrimeIdeal>>>,
}

impl NewPrimeState {
    pub fn new(a: &QuadInt, k: u64, budget: FactorBudget) -> Result<Self, WieferichError> {
        check_base(a)?;
        if k == 0 {
            return Err(WieferichError::ZeroModulus);
        }
        Ok(NewPrimeState { base: a.clone(), k, budget, levels: BTreeMap::new() })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    fn ensure_levels(&mut self, ms: &[u64]) -> Result<(), WieferichError> {
        let missing: Vec<u64> = ms.iter().copied().filter(|m| !self.levels.contains_key(m)).collect();
        let (a, k, budget) = (&self.base, self.k, self.budget);
        let computed: Vec<(u64, Result<Option<FactoredIdeal>, WieferichError>)> =
            missing.par_iter().map(|&m| (m, cprime_part(k * m, a, budget))).collect();
        for (m, r) in computed {
            self.levels.insert(m, r?.map(|f| f.primes().cloned().collect()));
        }
        Ok(())
    }

    /// Primes of `C′_{km,a}`, or `None` when that level was skipped.
    pub fn level_primes(&mut self, m: u64) -> Result<Option<Vec<PrimeIdeal>>, WieferichError> {
        self.ensure_levels(&[m])?;
        Ok(self.levels[&m].clone())
    }

    /// The first prime of `C′_{kq,a}` not dividing any `C′_{km,a}` with `m < q`.
    pub fn new_prime_for(&mut self, q: u64) -> Result<Option<PrimeIdeal>, WieferichError> {
        if !is_prime_u64(q) {
            return Err(WieferichError::NotPrimeLevel(q));
        }
        let ms: Vec<u64> = (1..=q).collect();
        self.ensure_levels(&ms)?;
        let seen: BTreeSet<&PrimeIdeal> =
            (1..q).filter_map(|m| self.levels[&m].as_ref()).flatten().collect();
        let skipped = (1..q).filter(|m| self.levels[m].is_none()).count();
        if skipped > 0 {
            log::info!("new prime for q = {q}: {skipped} earlier levels were skipped");
        }
        let Some(current) = &self.levels[&q] else {
            log::info!("level {} skipped: incomplete factorization", self.k * q);
            return Ok(None);
        };
        let found = current.iter().find(|p| !seen.contains(p)).cloned();
        if found.is_none() {
            log::info!("no new prime at level {}", self.k * q);
        }
        Ok(found)
    }
}

/// Free-function form of [`NewPrimeState::new_prime_for`].
pub fn new_prime_for(k: u64, q: u64, a: &QuadInt, state: &mut NewPrimeState) -> Result<Option<PrimeIdeal>, WieferichError> {
    if state.k != k || state.base != *a {
        return Err(WieferichError::Invariant("state was built for a different (a, k)".into()));
    }
    state.new_prime_for(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum CensusStrategy {
    /// Every prime of `C′_{nk,a}` for `n ≤ n_max`.
    #[default]
    CprimeLevels,
    /// One new prime of `C′_{kq,a}` for each prime `q ≤ n_max`.
    PrimeLevels,
}

/// A non-Wieferich place discovered by a census.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRecord {
    pub prime: PrimeIdeal,
    pub level: u64,
    pub norm: BigInt,
    pub residue_class: u64,
}

#[derive(Serialize)]
struct CensusRecordJson {
    #[serde(flatten)]
    prime: PrimeRecordNoExp,
    #[serde(with = "crate::json::bigint")]
    norm: BigInt,
    level: u64,
    residue_class: u64,
}

impl Serialize for CensusRecord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CensusRecordJson {
            prime: (&self.prime).into(),
            norm: self.norm.clone(),
            level: self.level,
            residue_class: self.residue_class,
        }
        .serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exclusion {
    Ramified,
    DividesModulus,
    AboveBound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcludedPrime {
    pub prime: PrimeIdeal,
    pub level: u64,
    pub reason: Exclusion,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusSummary {
    #[serde(with = "crate::json::vec_bigint")]
    pub x_grid: Vec<BigInt>,
    /// `counts[i]`: records from levels `≤ k·(i+1)` with norm `≤ x_grid[i]`.
    pub counts: Vec<u64>,
    pub count_over_log_x: Vec<f64>,
    pub complete_levels: Vec<u64>,
    pub skipped_levels: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CensusOutput {
    pub base: QuadInt,
    pub k: u64,
    pub records: Vec<CensusRecord>,
    pub excluded: Vec<ExcludedPrime>,
    pub summary: CensusSummary,
}

impl CensusOutput {
    /// Number of records with `Nm(P) ≤ x`.
    pub fn count_up_to(&self, x: &BigInt) -> u64 {
        self.records.iter().filter(|r| r.norm <= *x).count() as u64
    }
}

#[derive(Clone, Debug)]
pub struct CensusConfig {
    pub base: QuadInt,
    pub k: u64,
    pub n_max: u64,
    pub budget: FactorBudget,
    pub strategy: CensusStrategy,
    /// Drop records with norm above this bound.
    pub x_max: Option<BigInt>,
}

impl CensusConfig {
    pub fn new(base: QuadInt, k: u64, n_max: u64, budget: FactorBudget) -> Self {
        CensusConfig { base, k, n_max, budget, strategy: CensusStrategy::default(), x_max: None }
    }
}

/// A level index with the primes it contributes, `None` when skipped.
type LevelPrimes = (u64, Option<Vec<PrimeIdeal>>);

/// Non-Wieferich places with `Nm(P) ≡ 1 (mod k)` found among the `C′` levels.
pub fn census(cfg: &CensusConfig) -> Result<CensusOutput, WieferichError> {
    let a = &cfg.base;
    let k = cfg.k;
    if k == 0 {
        return Err(WieferichError::ZeroModulus);
    }
    match a.classify_base() {
        c @ (BaseClass::Zero | BaseClass::RootOfUnity) => {
            return Err(WieferichError::IneligibleBase { base: a.to_string(), class: c })
        }
        BaseClass::Small => log::warn!(
            "base {a} has a conjugate of absolute value below 2; only the weaker growth statement applies"
        ),
        BaseClass::Eligible => {}
    }

    let per_level: Vec<LevelPrimes> = match cfg.strategy {
        CensusStrategy::CprimeLevels => {
            let levels: Vec<u64> = (1..=cfg.n_max).collect();
            let computed: Vec<Result<LevelPrimes, WieferichError>> = levels
                .par_iter()
                .map(|&n| {
                    let f = cprime_part(n * k, a, cfg.budget)?;
                    Ok((n, f.map(|f| f.primes().cloned().collect())))
                })
                .collect();
            computed.into_iter().collect::<Result<_, _>>()?
        }
        CensusStrategy::PrimeLevels => {
            let mut state = NewPrimeState::new(a, k, cfg.budget)?;
            let mut out = Vec::new();
            for q in (2..=cfg.n_max).filter(|&q| is_prime_u64(q)) {
                let complete = state.level_primes(q)?.is_some();
                let found = state.new_prime_for(q)?;
                out.push((q, complete.then(|| found.into_iter().collect())));
            }
            out
        }
    };

    let mut seen: BTreeSet<PrimeIdeal> = BTreeSet::new();
    let mut records = Vec::new();
    let mut excluded = Vec::new();
    let mut complete_levels = Vec::new();
    let mut skipped_levels = Vec::new();
    let k_big = BigInt::from(k);
    for (n, primes) in per_level {
        let Some(primes) = primes else {
            skipped_levels.push(n);
            continue;
        };
        complete_levels.push(n);
        let level = n * k;
        for p in primes {
            if !seen.insert(p.clone()) {
                continue;
            }
            let reason = if p.is_ramified() {
                Some(Exclusion::Ramified)
            } else if k_big.is_multiple_of(p.p()) {
                Some(Exclusion::DividesModulus)
            } else if cfg.x_max.as_ref().is_some_and(|x| p.norm() > *x) {
                Some(Exclusion::AboveBound)
            } else {
                None
            };
            if let Some(reason) = reason {
                log::debug!("level {level}: {p} excluded ({reason:?})");
                excluded.push(ExcludedPrime { prime: p, level, reason });
                continue;
            }
            let norm = p.norm();
            let residue_class = norm.mod_floor(&k_big).to_u64().expect("below k");
            if is_wieferich_place(&p, a)? {
                return Err(WieferichError::Invariant(format!("{p} from C′_{level} is a Wieferich place")));
            }
            if residue_class != 1 % k {
                return Err(WieferichError::Invariant(format!("{p} from C′_{level} has norm ≢ 1 mod {k}")));
            }
            records.push(CensusRecord { prime: p, level, norm, residue_class });
        }
    }

    let summary = summarize(a, k, cfg.n_max, &records, complete_levels, skipped_levels);
    Ok(CensusOutput { base: a.clone(), k, records, excluded, summary })
}

fn summarize(
    a: &QuadInt,
    k: u64,
    n_max: u64,
    records: &[CensusRecord],
    complete_levels: Vec<u64>,
    skipped_levels: Vec<u64>,
) -> CensusSummary {
    let norm_a = a.abs_norm();
    let ln_norm_a = ln_big(&norm_a);
    let mut x_grid = Vec::new();
    let mut counts = Vec::new();
    let mut ratios = Vec::new();
    for n in 1..=n_max {
        let x = norm_a.pow((k * n) as u32);
        // what a census of depth n sees: deeper levels are not yet enumerated
        let count = records.iter().filter(|r| r.level <= k * n && r.norm <= x).count() as u64;
        let log_x = (k * n) as f64 * ln_norm_a;
        ratios.push(count as f64 / log_x);
        counts.push(count);
        x_grid.push(x);
    }
    CensusSummary { x_grid, counts, count_over_log_x: ratios, complete_levels, skipped_levels }
}

/// Natural logarithm of a positive big integer.
pub fn ln_big(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().expect("finite");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// One checked prime in [`order_consistency_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderCheck {
    #[serde(flatten)]
    prime: PrimeRecordNoExpOwned,
    #[serde(with = "crate::json::bigint")]
    pub order: BigInt,
    #[serde(with = "crate::json::bigint")]
    pub expected: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
struct PrimeRecordNoExpOwned {
    #[serde(with = "crate::json::bigint")]
    p: BigInt,
    kind: crate::ideals::SplitKind,
    #[serde(with = "crate::json::opt_bigint")]
    t: Option<BigInt>,
}

impl OrderCheck {
    pub fn prime_record(&self) -> (&BigInt, crate::ideals::SplitKind) {
        (&self.prime.p, self.prime.kind)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderReport {
    pub n: u64,
    pub complete: bool,
    pub checked: Vec<OrderCheck>,
    pub excluded_ramified: Vec<PrimeRecord>,
    pub order_unavailable: Vec<PrimeRecord>,
    pub violations: Vec<String>,
}

/// For every unramified `P | (Φ_n(a))` over `p`: `e_P(a) = n·p^{−v_p(n)}` and
/// `Nm(P) ≡ 1` modulo that order.
pub fn order_consistency_check(n: u64, a: &QuadInt, budget: FactorBudget) -> Result<OrderReport, WieferichError> {
    check_base(a)?;
    let phi = cyclotomic_eval(n, a)?;
    let mut report = OrderReport {
        n,
        complete: true,
        checked: Vec::new(),
        excluded_ramified: Vec::new(),
        order_unavailable: Vec::new(),
        violations: Vec::new(),
    };
    let factors = match factor_principal(&phi, budget) {
        Ok(f) => f,
        Err(IdealError::IncompleteFactorization { .. }) => {
            report.complete = false;
            return Ok(report);
        }
        Err(e) => return Err(e.into()),
    };
    for p in factors.primes() {
        if p.is_ramified() {
            report.excluded_ramified.push(p.record(1));
            continue;
        }
        let (_, n_prime_free) = split_valuation(&BigUint::from(n), p.p().magnitude());
        let expected = to_int(n_prime_free);
        let order = match residue_order(p, a, budget) {
            Ok(o) => o,
            Err(WieferichError::OrderUnavailable { .. }) => {
                report.order_unavailable.push(p.record(1));
                continue;
            }
            Err(e) => return Err(e),
        };
        if order != expected {
            report.violations.push(format!("{p}: order {order}, expected {expected}"));
        }
        if !(p.norm() - 1u32).is_multiple_of(&expected) {
            report.violations.push(format!("{p}: Nm - 1 not divisible by {expected}"));
        }
        let PrimeRecord { p: pp, kind, t, .. } = p.record(1);
        report.checked.push(OrderCheck { prime: PrimeRecordNoExpOwned { p: pp, kind, t }, order, expected });
    }
    Ok(report)
}

/// If `P | Φ_n(a)` and `P ∤ Φ_m(a)` for every `m < n`, then `Nm(P) ≡ 1 (mod n)`.
///
/// Returns the violations over `n ≤ n_max`; levels after an incomplete
/// `Φ_m(a)` are still examined but primes are only judged against the
/// levels that did factor.
pub fn first_occurrence_check(a: &QuadInt, n_max: u64, budget: FactorBudget) -> Result<(u64, Vec<String>), WieferichError> {
    let mut cache = CyclotomicFactors::new(a, budget)?;
    cache.prefetch(1..=n_max);
    let mut seen: BTreeSet<PrimeIdeal> = BTreeSet::new();
    let mut checked = 0;
    let mut violations = Vec::new();
    let mut gap = false;
    for n in 1..=n_max {
        let Some(f) = cache.phi(n) else {
            gap = true;
            continue;
        };
        for p in f.primes() {
            if seen.contains(p) {
                continue;
            }
            // a prime first seen after a skipped level may have occurred there
            if !gap && n > 1 {
                checked += 1;
                if !(p.norm() - 1u32).is_multiple_of(&BigInt::from(n)) {
                    violations.push(format!("{p} first divides Φ_{n}(a) but Nm ≢ 1 mod {n}"));
                }
            }
        }
        seen.extend(f.primes().cloned());
    }
    Ok((checked, violations))
}
