//! Effort-bounded factorization of rational integers.
//!
//! Trial division up to a limit, then Brent's variant of Pollard's rho with a
//! global iteration cap. Anything left over is reported as an unfactored
//! cofactor rather than an error.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, is_prime_u64, mul_mod_u64, primes_up_to};

/// Limits on factoring effort.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorBudget {
    pub trial_limit: u64,
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget { trial_limit: 1_000_000, rho_iterations: 1_000_000 }
    }
}

impl FactorBudget {
    pub fn new(trial_limit: u64, rho_iterations: u64) -> Option<Self> {
        (trial_limit > 0 && rho_iterations > 0).then_some(FactorBudget { trial_limit, rho_iterations })
    }
}

/// Result of [`integer_factor`]. Complete exactly when `cofactor` is `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerFactorization {
    pub factors: Vec<(BigUint, u32)>,
    pub cofactor: Option<BigUint>,
}

impl IntegerFactorization {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_none()
    }

    /// Product of the factored part and the cofactor.
    pub fn value(&self) -> BigUint {
        let mut acc = self.cofactor.clone().unwrap_or_else(BigUint::one);
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        acc
    }
}

const CACHED_TRIAL_LIMIT: u64 = 1_000_000;

fn trial_primes(limit: u64) -> std::borrow::Cow<'static, [u64]> {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    if limit <= CACHED_TRIAL_LIMIT {
        let table = TABLE.get_or_init(|| primes_up_to(CACHED_TRIAL_LIMIT));
        let end = table.partition_point(|&p| p <= limit);
        std::borrow::Cow::Borrowed(&table[..end])
    } else {
        std::borrow::Cow::Owned(primes_up_to(limit))
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn brent_u64(n: u64, c: u64, budget: &mut u64) -> Option<u64> {
    const BATCH: u64 = 128;
    let f = |v: u64| (mul_mod_u64(v, v, n) + c) % n;
    let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
    let (mut r, mut q, mut g) = (1u64, 1u64, 1u64);
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let steps = BATCH.min(r - k);
            if *budget < steps {
                return None;
            }
            *budget -= steps;
            for _ in 0..steps {
                y = f(y);
                q = mul_mod_u64(q, x.abs_diff(y), n);
            }
            g = gcd_u64(q, n);
            k += steps;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn brent_big(n: &BigUint, c: u64, budget: &mut u64) -> Option<BigUint> {
    const BATCH: u64 = 128;
    let c = BigUint::from(c);
    let f = |v: &BigUint| (v * v + &c) % n;
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let mut y = BigUint::from(2u32);
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut r = 1u64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let steps = BATCH.min(r - k);
            if *budget < steps {
                return None;
            }
            *budget -= steps;
            for _ in 0..steps {
                y = f(&y);
                q = q * diff(&x, &y) % n;
            }
            g = q.gcd(n);
            k += steps;
        }
        r *= 2;
    }
    if g == *n {
        loop {
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (g != *n).then_some(g)
}

fn is_prime_any(n: &BigUint) -> bool {
    match n.to_u64() {
        Some(v) => is_prime_u64(v),
        None => is_prime(n),
    }
}

/// Splits a composite `n` into two nontrivial factors within the remaining budget.
fn split_composite(n: &BigUint, budget: &mut u64) -> Option<(BigUint, BigUint)> {
    for k in [2u32, 3, 5, 7] {
        let r = n.nth_root(k);
        if r.pow(k) == *n {
            let rest = n / &r;
            return Some((r, rest));
        }
    }
    for c in 1u64.. {
        if *budget == 0 {
            return None;
        }
        let found = match n.to_u64() {
            Some(v) => brent_u64(v, c, budget).map(BigUint::from),
            None => brent_big(n, c, budget),
        };
        match found {
            Some(d) => {
                let rest = n / &d;
                return Some((d, rest));
            }
            None if *budget == 0 => return None,
            None => continue,
        }
    }
    None
}

/// Factors `n ≥ 1` within `budget`.
pub fn integer_factor(n: &BigUint, budget: FactorBudget) -> IntegerFactorization {
    assert!(!n.is_zero(), "integer_factor needs n >= 1");
    let mut found: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut rest = n.clone();

    for &p in trial_primes(budget.trial_limit).iter() {
        if rest.is_one() {
            break;
        }
        if let Some(small) = rest.to_u64() {
            if p.saturating_mul(p) > small {
                break;
            }
            if small % p == 0 {
                let mut e = 0;
                let mut s = small;
                while s % p == 0 {
                    s /= p;
                    e += 1;
                }
                *found.entry(BigUint::from(p)).or_default() += e;
                rest = BigUint::from(s);
            }
        } else if (&rest % p).is_zero() {
            let pb = BigUint::from(p);
            let mut e = 0;
            loop {
                let (q, r) = rest.div_rem(&pb);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                e += 1;
            }
            *found.entry(pb).or_default() += e;
        }
    }

    let mut pending = Vec::new();
    if !rest.is_one() {
        pending.push(rest);
    }
    let mut left = budget.rho_iterations;
    let mut unfactored = BigUint::one();
    while let Some(m) = pending.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime_any(&m) {
            *found.entry(m).or_default() += 1;
            continue;
        }
        match split_composite(&m, &mut left) {
            Some((a, b)) => {
                pending.push(a);
                pending.push(b);
            }
            None => unfactored *= m,
        }
    }

    IntegerFactorization {
        factors: found.into_iter().collect(),
        cofactor: (!unfactored.is_one()).then_some(unfactored),
    }
}
