//! Machine checks of the explicit inequalities, trend reports for the
//! asymptotic statements, abc quality, and the small-norm exception set.
//!
//! Every pass/fail decision here is made with exact integer or rational
//! arithmetic. Floating point appears only in reported margins and ratios.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cyclo::{cyclotomic_eval, divisors, euler_phi, mobius};
use crate::factor::FactorBudget;
use crate::ideals::{factor_principal, FactoredIdeal, IdealError};
use crate::qfield::{BaseClass, FieldSpec};
use crate::wieferich::{cprime_part, ln_big, CyclotomicFactors, WieferichError};
use crate::QuadInt;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Wieferich(#[from] WieferichError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

/// Outcome of one family of exact checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheckReport {
    pub check: &'static str,
    pub base: Option<QuadInt>,
    /// Rational parameter `b` of the sandwich check, as `p/q`.
    pub b: Option<String>,
    pub n_min: u64,
    pub n_max: u64,
    pub checked: u64,
    pub skipped: Vec<u64>,
    pub violations: Vec<String>,
    /// Smallest `log(rhs) − log(lhs)` seen; informational only.
    pub min_log_slack: Option<f64>,
}

impl BoundCheckReport {
    fn new(check: &'static str, base: Option<&QuadInt>, n_min: u64, n_max: u64) -> Self {
        BoundCheckReport {
            check,
            base: base.cloned(),
            b: None,
            n_min,
            n_max,
            checked: 0,
            skipped: Vec::new(),
            violations: Vec::new(),
            min_log_slack: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn slack(&mut self, s: f64) {
        self.min_log_slack = Some(self.min_log_slack.map_or(s, |m| m.min(s)));
    }
}

fn ln_ratio(big: &BigInt, small: &BigInt) -> f64 {
    if small.is_zero() {
        f64::INFINITY
    } else {
        ln_big(big) - ln_big(small)
    }
}

/// `max(|Nm(a^n − 1)|, |Nm(a^n + 1)|) ≤ 2^{[K:Q]} |Nm(a)|^n` for `1 ≤ n ≤ n_max`.
///
/// Levels where `a^n − 1 = 0` are reported as skipped.
pub fn check_upper_norm_bound(a: &QuadInt, n_max: u64) -> Result<BoundCheckReport, VerifyError> {
    if a.is_zero() {
        return Err(VerifyError::Precondition("the upper norm bound needs Nm(a) >= 1".into()));
    }
    let field = a.field();
    let one = QuadInt::one(field);
    let scale = BigInt::one() << field.degree();
    let norm_a = a.abs_norm();
    let rows: Vec<(u64, Option<(BigInt, BigInt)>)> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let p = a.power(n);
            let minus = p.clone() - one.clone();
            if minus.is_zero() {
                return (n, None);
            }
            let lhs = minus.abs_norm().max((p + one.clone()).abs_norm());
            (n, Some((lhs, &scale * norm_a.pow(n as u32))))
        })
        .collect();
    let mut report = BoundCheckReport::new("upper-norm", Some(a), 1, n_max);
    for (n, row) in rows {
        let Some((lhs, rhs)) = row else {
            report.skipped.push(n);
            continue;
        };
        report.checked += 1;
        if lhs > rhs {
            report.violations.push(format!("n = {n}: {lhs} > {rhs}"));
        }
        report.slack(ln_ratio(&rhs, &lhs));
    }
    Ok(report)
}

/// `|Nm(a)|^{φ(n)} ≤ 2^{[K:Q]} |Nm(Φ_n(a))|` for `2 ≤ n ≤ n_max`; `a` must be eligible.
pub fn check_lower_phi_bound(a: &QuadInt, n_max: u64) -> Result<BoundCheckReport, VerifyError> {
    if a.classify_base() != BaseClass::Eligible {
        return Err(VerifyError::Precondition(format!(
            "the lower cyclotomic bound needs every conjugate of the base to have absolute value >= 2; {a} does not"
        )));
    }
    let scale = BigInt::one() << a.field().degree();
    let norm_a = a.abs_norm();
    let rows: Vec<(u64, BigInt, BigInt)> = (2..=n_max.max(1))
        .into_par_iter()
        .map(|n| {
            let phi_n = euler_phi(n).expect("n >= 2") as u32;
            let value = cyclotomic_eval(n, a).expect("eligible base");
            (n, norm_a.pow(phi_n), &scale * value.abs_norm())
        })
        .collect();
    let mut report = BoundCheckReport::new("lower-phi", Some(a), 2, n_max);
    for (n, lhs, rhs) in rows {
        report.checked += 1;
        if lhs > rhs {
            report.violations.push(format!("n = {n}: {lhs} > {rhs}"));
        }
        report.slack(ln_ratio(&rhs, &lhs));
    }
    Ok(report)
}

/// `−log 2 ≤ Σ_{d|n} μ(n/d) log(1 − b^{−d}) ≤ log 2` for `2 ≤ n ≤ n_max`.
///
/// The sum is the logarithm of the rational `P = Π_{d|n} (1 − b^{−d})^{μ(n/d)}`,
/// so the check is the exact comparison `1/2 ≤ P ≤ 2`.
pub fn check_sandwich(b: &BigRational, n_max: u64) -> Result<BoundCheckReport, VerifyError> {
    let two = BigRational::from_integer(BigInt::from(2));
    if *b < two {
        return Err(VerifyError::Precondition(format!("sandwich check needs b >= 2, got {b}")));
    }
    let half = two.recip();
    let rows: Vec<(u64, BigRational)> = (2..=n_max.max(1))
        .into_par_iter()
        .map(|n| {
            let mut num = BigRational::one();
            let mut den = BigRational::one();
            for d in divisors(n).expect("n >= 2") {
                let term = BigRational::one() - b.pow(-(d as i32));
                match mobius(n / d).expect("n >= 2") {
                    1 => num *= term,
                    -1 => den *= term,
                    _ => {}
                }
            }
            (n, num / den)
        })
        .collect();
    let mut report = BoundCheckReport::new("sandwich", None, 2, n_max);
    report.b = Some(b.to_string());
    for (n, p) in rows {
        report.checked += 1;
        if p < half || p > two {
            report.violations.push(format!("n = {n}: product {p} outside [1/2, 2]"));
        }
        let log_p = ln_big(p.numer()) - ln_big(p.denom());
        report.slack(std::f64::consts::LN_2 - log_p.abs());
    }
    Ok(report)
}

/// `C′_{m,a} + C′_{n,a} = O_K` for every pair of complete levels `1 ≤ m < n ≤ n_max`.
pub fn check_chen_pairwise(a: &QuadInt, n_max: u64, budget: FactorBudget) -> Result<BoundCheckReport, VerifyError> {
    let levels: Vec<(u64, Option<FactoredIdeal>)> = (1..=n_max)
        .into_par_iter()
        .map(|n| cprime_part(n, a, budget).map(|c| (n, c)))
        .collect::<Result<_, _>>()?;
    let mut report = BoundCheckReport::new("chen-pairwise", Some(a), 1, n_max);
    let complete: Vec<(u64, FactoredIdeal)> = levels
        .into_iter()
        .filter_map(|(n, c)| match c {
            Some(c) => Some((n, c)),
            None => {
                report.skipped.push(n);
                None
            }
        })
        .collect();
    for (i, (m, cm)) in complete.iter().enumerate() {
        for (n, cn) in &complete[i + 1..] {
            report.checked += 1;
            let g = cm.gcd(cn);
            if !g.is_unit() {
                report.violations.push(format!("C'_{m} + C'_{n} = {g}"));
            }
        }
    }
    Ok(report)
}

/// Per-level exponent ratios of `D`, `C` and `C′`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrendRow {
    pub n: u64,
    /// `n·log|Nm(a)|`
    pub log_x: f64,
    pub d_ratio: f64,
    pub c_ratio: f64,
    pub cp_ratio: f64,
    /// `log|Nm(a^n − 1)| / (n log|Nm(a)|)`
    pub total_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrendReport {
    pub base: QuadInt,
    pub n_max: u64,
    pub rows: Vec<TrendRow>,
    pub skipped: Vec<u64>,
    /// Max of the D-ratio over the last quarter of the complete levels.
    pub d_ratio_last_quartile_max: Option<f64>,
    pub c_ratio_min: Option<f64>,
    /// Levels where `Nm(C)·Nm(D) ≠ |Nm(a^n − 1)|`; must be empty.
    pub violations: Vec<String>,
}

pub fn bound_trend_report(a: &QuadInt, n_max: u64, budget: FactorBudget) -> Result<TrendReport, VerifyError> {
    let norm_a = a.abs_norm();
    if norm_a <= BigInt::one() {
        return Err(VerifyError::Wieferich(WieferichError::DegenerateBase {
            base: a.to_string(),
            class: a.classify_base(),
        }));
    }
    let ln_a = ln_big(&norm_a);
    let mut cache = CyclotomicFactors::new(a, budget)?;
    cache.prefetch(1..=n_max);
    let one = QuadInt::one(a.field());
    let mut report = TrendReport {
        base: a.clone(),
        n_max,
        rows: Vec::new(),
        skipped: Vec::new(),
        d_ratio_last_quartile_max: None,
        c_ratio_min: None,
        violations: Vec::new(),
    };
    for n in 1..=n_max {
        let cd = cache.decompose(n)?;
        if !cd.complete {
            report.skipped.push(n);
            continue;
        }
        let total = (a.power(n) - one.clone()).abs_norm();
        let (c_norm, d_norm) = (cd.c.norm(), cd.d.norm());
        if &c_norm * &d_norm != total {
            report.violations.push(format!("n = {n}: Nm(C)·Nm(D) = {} ≠ {total}", &c_norm * &d_norm));
        }
        let log_x = n as f64 * ln_a;
        let phi_n = euler_phi(n).expect("n >= 1") as f64;
        report.rows.push(TrendRow {
            n,
            log_x,
            d_ratio: ln_big(&d_norm) / log_x,
            c_ratio: ln_big(&c_norm) / log_x,
            cp_ratio: ln_big(&cd.cp.norm()) / (phi_n * ln_a),
            total_ratio: ln_big(&total) / log_x,
        });
    }
    let rows = &report.rows;
    if !rows.is_empty() {
        let start = rows.len() - rows.len().div_ceil(4);
        report.d_ratio_last_quartile_max = rows[start..].iter().map(|r| r.d_ratio).reduce(f64::max);
        report.c_ratio_min = rows.iter().map(|r| r.c_ratio).reduce(f64::min);
    }
    Ok(report)
}

/// abc statistics of `α + β = ζ` with `ζ` a root of unity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QualityReport {
    pub alpha: QuadInt,
    pub beta: QuadInt,
    #[serde(with = "crate::json::bigint")]
    pub max_norm: BigInt,
    #[serde(with = "crate::json::bigint")]
    pub rad_norm: BigInt,
    /// Height over the infinite places, `max(|Nm α|, |Nm β|, 1)^{1/[K:Q]}`.
    pub height: f64,
    /// `Π_{P | αβ} Nm(P)^{1/[K:Q]}`
    pub conductor: f64,
    pub quality: f64,
}

pub fn abc_quality(alpha: &QuadInt, beta: &QuadInt, budget: FactorBudget) -> Result<QualityReport, VerifyError> {
    if alpha.is_zero() || beta.is_zero() {
        return Err(VerifyError::Precondition("α and β must be nonzero".into()));
    }
    let sum = alpha.checked_add(beta).map_err(|e| VerifyError::Precondition(e.to_string()))?;
    if !sum.is_unit() {
        return Err(VerifyError::Precondition(format!("α + β = {sum} is not a root of unity")));
    }
    let ra = factor_principal(alpha, budget)?.radical();
    let rb = factor_principal(beta, budget)?.radical();
    let rad_norm = ra.norm() * rb.norm();
    if rad_norm.is_one() {
        return Err(VerifyError::Precondition("α and β are both units; the quality is undefined".into()));
    }
    let max_norm = alpha.abs_norm().max(beta.abs_norm());
    let deg = alpha.field().degree() as f64;
    let (log_h, log_n) = (ln_big(&max_norm), ln_big(&rad_norm));
    Ok(QualityReport {
        alpha: alpha.clone(),
        beta: beta.clone(),
        height: root_f64(&max_norm, deg),
        conductor: root_f64(&rad_norm, deg),
        quality: log_h / log_n,
        max_norm,
        rad_norm,
    })
}

/// `v^{1/deg}` for `deg ∈ {1, 2}`.
fn root_f64(v: &BigInt, deg: f64) -> f64 {
    let f = v.to_f64().unwrap_or(f64::INFINITY);
    if deg == 1.0 {
        f
    } else {
        f.sqrt()
    }
}

/// Small-norm elements of one field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldExceptions {
    pub d: u64,
    pub elements: Vec<QuadInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExceptionSet {
    pub fields: Vec<FieldExceptions>,
    /// Distinct complex values across all fields; rational integers appear once.
    pub union: Vec<QuadInt>,
}

impl ExceptionSet {
    pub fn len(&self) -> usize {
        self.union.len()
    }

    pub fn is_empty(&self) -> bool {
        self.union.is_empty()
    }
}

/// Sort key identifying a complex value across fields.
fn value_key(a: &QuadInt) -> (u64, BigInt, BigInt) {
    if a.y().is_zero() {
        (0, a.x().clone(), BigInt::zero())
    } else {
        (a.field().selector(), a.x().clone(), a.y().clone())
    }
}

/// Every `a ∈ O_K` with `Nm(a) ≤ 3`, for each `d` in `d_list`.
///
/// `Nm(a) ≥ d·y²/4` and `Nm(a) ≥ (x + y/2)²` bound the search to `|x|, |y| ≤ 4`.
pub fn exception_set(d_list: &[u64]) -> Result<ExceptionSet, VerifyError> {
    let three = BigInt::from(3);
    let mut fields = Vec::new();
    let mut union: BTreeSet<(u64, BigInt, BigInt)> = BTreeSet::new();
    let mut values = Vec::new();
    for &d in d_list {
        let field = FieldSpec::new(d).map_err(|e| VerifyError::Precondition(e.to_string()))?;
        if field.is_rational() {
            return Err(VerifyError::Precondition("exception sets are for imaginary quadratic fields".into()));
        }
        let mut elements = Vec::new();
        for x in -4..=4i64 {
            for y in -4..=4i64 {
                let a = QuadInt::from_i64(field, x, y).expect("quadratic field");
                if a.norm() <= three {
                    elements.push(a);
                }
            }
        }
        elements.sort_by_key(value_key);
        for a in &elements {
            if union.insert(value_key(a)) {
                values.push(a.clone());
            }
        }
        fields.push(FieldExceptions { d, elements });
    }
    values.sort_by_key(value_key);
    Ok(ExceptionSet { fields, union: values })
}

/// Squarefree `d` with `1 ≤ d ≤ d_max`.
pub fn squarefree_up_to(d_max: u64) -> Vec<u64> {
    (1..=d_max).filter(|&d| FieldSpec::new(d).is_ok()).collect()
}

/// `count` eligible bases, spread round-robin over a fixed list of fields.
///
/// Within a field, candidates are taken by increasing `max(|x|, |y|)`, then
/// `x`, then `y`, so the sample is deterministic.
pub fn eligible_sample(count: usize) -> Vec<QuadInt> {
    let fields: Vec<FieldSpec> =
        [0u64, 1, 2, 3, 5, 7, 11].iter().map(|&d| FieldSpec::new(d).expect("valid")).collect();
    let mut pools: Vec<std::vec::IntoIter<QuadInt>> = fields
        .iter()
        .map(|&f| {
            let mut cands = Vec::new();
            for r in 0..=6i64 {
                for x in -r..=r {
                    for y in -r..=r {
                        if x.abs().max(y.abs()) != r || (f.is_rational() && y != 0) {
                            continue;
                        }
                        let a = QuadInt::from_i64(f, x, y).expect("valid");
                        if a.classify_base() == BaseClass::Eligible {
                            cands.push(a);
                        }
                    }
                }
            }
            cands.into_iter()
        })
        .collect();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let before = out.len();
        for pool in pools.iter_mut() {
            if out.len() == count {
                break;
            }
            if let Some(a) = pool.next() {
                out.push(a);
            }
        }
        assert!(out.len() > before, "candidate pools exhausted");
    }
    out
}

/// Exact rational `p/q`, a convenience for callers building sandwich parameters.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}
