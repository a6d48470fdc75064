//! Cyclotomic values over `O_K` and the arithmetic functions around them.

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::qfield::{BaseClass, FieldError, QuadInteger};
use crate::scalar::Coord;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("argument must be positive")]
    ZeroArgument,
    #[error("base is zero or a root of unity, so some a^d - 1 vanishes")]
    DegenerateBase,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `(prime, exponent)` pairs of `n ≥ 1` by trial division.
pub fn factor_small(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> Result<u64, CycloError> {
    if n == 0 {
        return Err(CycloError::ZeroArgument);
    }
    Ok(factor_small(n).iter().fold(n, |acc, (p, _)| acc / p * (p - 1)))
}

pub fn mobius(n: u64) -> Result<i8, CycloError> {
    if n == 0 {
        return Err(CycloError::ZeroArgument);
    }
    let f = factor_small(n);
    if f.iter().any(|(_, e)| *e > 1) {
        Ok(0)
    } else if f.len() % 2 == 0 {
        Ok(1)
    } else {
        Ok(-1)
    }
}

pub fn divisors(n: u64) -> Result<Vec<u64>, CycloError> {
    if n == 0 {
        return Err(CycloError::ZeroArgument);
    }
    let mut out = vec![1u64];
    for (p, e) in factor_small(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// `φ(1..=limit)` by a linear sieve; index 0 is unused.
pub fn phi_table(limit: usize) -> Vec<u64> {
    let mut phi: Vec<u64> = (0..=limit as u64).collect();
    for i in 2..=limit {
        if phi[i] == i as u64 {
            let mut j = i;
            while j <= limit {
                phi[j] -= phi[j] / i as u64;
                j += i;
            }
        }
    }
    phi
}

/// `Φ_n(a) = Π_{d|n} (a^d − 1)^{μ(n/d)}`, evaluated exactly.
///
/// The factors with `μ = 1` are multiplied together and the product of the
/// `μ = −1` factors is divided out at the end.
pub fn cyclotomic_eval<T: Coord>(n: u64, a: &QuadInteger<T>) -> Result<QuadInteger<T>, CycloError> {
    if n == 0 {
        return Err(CycloError::ZeroArgument);
    }
    if matches!(a.classify_base(), BaseClass::Zero | BaseClass::RootOfUnity) {
        return Err(CycloError::DegenerateBase);
    }
    let field = a.field();
    let one = QuadInteger::one(field);
    let mut num = one.clone();
    let mut den = one.clone();
    for d in divisors(n)? {
        let term = a.power(d).checked_sub(&one)?;
        match mobius(n / d)? {
            1 => num = num.multiply(&term)?,
            -1 => den = den.multiply(&term)?,
            _ => {}
        }
    }
    Ok(num.exact_divide(&den)?)
}

/// `c(k) = Π_{p | k} (1 − gcd(k, p)/p²)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DingConstant {
    pub k: u64,
    #[serde(serialize_with = "ratio_as_string")]
    pub value: Ratio<u64>,
}

fn ratio_as_string<S: serde::Serializer>(r: &Ratio<u64>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub fn ding_constant(k: u64) -> Result<DingConstant, CycloError> {
    if k == 0 {
        return Err(CycloError::ZeroArgument);
    }
    let value = factor_small(k).iter().fold(Ratio::from_integer(1u64), |acc, &(p, _)| {
        acc * (Ratio::from_integer(1) - Ratio::new(k.gcd(&p), p * p))
    });
    Ok(DingConstant { k, value })
}

/// `#{n ≤ x : φ(nk) > (2c(k)/3)·n·k}`, with the strict inequality decided exactly.
pub fn ding_count(x: u64, k: u64) -> Result<u64, CycloError> {
    if x == 0 {
        return Err(CycloError::ZeroArgument);
    }
    let c = ding_constant(k)?.value;
    let (num, den) = (*c.numer() as u128, *c.denom() as u128);
    let phi = phi_table((x * k) as usize);
    // φ(nk) > 2·num·n·k / (3·den)  ⟺  3·den·φ(nk) > 2·num·n·k
    Ok((1..=x)
        .filter(|&n| {
            let nk = n * k;
            3 * den * phi[nk as usize] as u128 > 2 * num * nk as u128
        })
        .count() as u64)
}
