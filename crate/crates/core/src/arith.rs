//! Rational-integer helpers: primality, modular arithmetic, residue symbols.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub(crate) fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, b, m);
        }
        b = mul_mod_u64(b, b, m);
        e >>= 1;
    }
    acc
}

const SMALL_PRIMES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn strong_probable_prime_u64(n: u64, a: u64) -> bool {
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let mut x = pow_mod_u64(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod_u64(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic for all `u64` (the first twelve prime bases suffice below 3.3·10²⁴).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    SMALL_PRIMES[..12].iter().all(|&a| strong_probable_prime_u64(n, a))
}

fn strong_probable_prime(n: &BigUint, a: &BigUint) -> bool {
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    let mut x = a.modpow(&d, n);
    if x == one || x == n1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == n1 {
            return true;
        }
    }
    false
}

fn is_perfect_square(n: &BigUint) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}

fn mod_signed(v: &BigInt, n: &BigInt) -> BigInt {
    v.mod_floor(n)
}

fn half_mod(v: BigInt, n: &BigInt) -> BigInt {
    if v.is_odd() {
        (v + n) / 2
    } else {
        v / 2
    }
}

/// Strong Lucas probable-prime test with Selfridge parameters.
fn strong_lucas_probable_prime(n: &BigUint) -> bool {
    if is_perfect_square(n) {
        return false;
    }
    let mut d: i64 = 5;
    loop {
        let j = jacobi(&BigInt::from(d), n);
        if j == -1 {
            break;
        }
        if j == 0 && BigUint::from(d.unsigned_abs()) != *n {
            return false;
        }
        d = if d > 0 { -(d + 2) } else { -d + 2 };
    }
    let nn = BigInt::from_biguint(Sign::Plus, n.clone());
    let p = BigInt::one();
    let q = BigInt::from((1 - d) / 4);
    let dd = BigInt::from(d);
    let n1 = n + 1u32;
    let s = n1.trailing_zeros().unwrap_or(0);
    let k = &n1 >> s;

    let mut u = BigInt::one();
    let mut v = p.clone();
    let mut qk = mod_signed(&q, &nn);
    let bits = k.bits();
    for i in (0..bits - 1).rev() {
        u = mod_signed(&(&u * &v), &nn);
        v = mod_signed(&(&v * &v - 2 * &qk), &nn);
        qk = mod_signed(&(&qk * &qk), &nn);
        if k.bit(i) {
            let nu = half_mod(&p * &u + &v, &nn);
            let nv = half_mod(&dd * &u + &p * &v, &nn);
            u = mod_signed(&nu, &nn);
            v = mod_signed(&nv, &nn);
            qk = mod_signed(&(&qk * &q), &nn);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = mod_signed(&(&v * &v - 2 * &qk), &nn);
        if v.is_zero() {
            return true;
        }
        qk = mod_signed(&(&qk * &qk), &nn);
    }
    false
}

/// Primality for arbitrary size.
///
/// Deterministic below 3.317·10²⁴ (Miller–Rabin with the first thirteen prime
/// bases). Above that bound the Miller–Rabin rounds are followed by a strong
/// Lucas test (BPSW), which has no known counterexample.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    if !SMALL_PRIMES.iter().all(|&a| strong_probable_prime(n, &BigUint::from(a))) {
        return false;
    }
    let bound: BigUint = "3317044064679887385961981".parse().expect("literal");
    if *n < bound {
        return true;
    }
    strong_lucas_probable_prime(n)
}

pub fn is_prime_int(n: &BigInt) -> bool {
    n.sign() == Sign::Plus && is_prime(n.magnitude())
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: &BigInt, n: &BigUint) -> i32 {
    assert!(n.is_odd(), "Jacobi symbol needs an odd modulus");
    let nn = BigInt::from_biguint(Sign::Plus, n.clone());
    let mut a = a.mod_floor(&nn).to_biguint().expect("non-negative");
    let mut n = n.clone();
    let mut result = 1;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz;
        let n8 = (&n % 8u32).to_u32().expect("small");
        if tz % 2 == 1 && (n8 == 3 || n8 == 5) {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32) == BigUint::from(3u32) && (&n % 4u32) == BigUint::from(3u32) {
            result = -result;
        }
        a %= &n;
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Kronecker symbol `(disc/p)` for a prime `p`.
pub fn kronecker_at_prime(disc: i64, p: &BigUint) -> i32 {
    if *p == BigUint::from(2u32) {
        if disc % 2 == 0 {
            return 0;
        }
        return match disc.rem_euclid(8) {
            1 | 7 => 1,
            _ => -1,
        };
    }
    jacobi(&BigInt::from(disc), p)
}

/// Exponent of `p` in `n` and the cofactor.
pub fn split_valuation(n: &BigUint, p: &BigUint) -> (u32, BigUint) {
    let mut v = 0;
    let mut rest = n.clone();
    if rest.is_zero() {
        return (0, rest);
    }
    loop {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() {
            return (v, rest);
        }
        rest = q;
        v += 1;
    }
}

pub fn valuation_int(n: &BigInt, p: &BigUint) -> u32 {
    split_valuation(n.magnitude(), p).0
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// A square root of `a` modulo an odd prime `p`, if one exists (Tonelli–Shanks).
pub fn sqrt_mod_prime(a: &BigInt, p: &BigUint) -> Option<BigUint> {
    let pp = BigInt::from_biguint(Sign::Plus, p.clone());
    let a = a.mod_floor(&pp).to_biguint().expect("reduced");
    if a.is_zero() {
        return Some(BigUint::zero());
    }
    if *p == BigUint::from(2u32) {
        return Some(a);
    }
    if jacobi(&BigInt::from(a.clone()), p) != 1 {
        return None;
    }
    let one = BigUint::one();
    let p1 = p - &one;
    if (p % 4u32) == BigUint::from(3u32) {
        return Some(a.modpow(&((p + &one) >> 2), p));
    }
    let s = p1.trailing_zeros().unwrap_or(0);
    let q = &p1 >> s;
    let mut z = BigUint::from(2u32);
    while jacobi(&BigInt::from(z.clone()), p) != -1 {
        z += 1u32;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + &one) >> 1), p);
    while !t.is_one() {
        let mut i = 0;
        let mut t2 = t.clone();
        while !t2.is_one() {
            t2 = &t2 * &t2 % p;
            i += 1;
        }
        let b = c.modpow(&(BigUint::one() << (m - i - 1)), p);
        m = i;
        c = &b * &b % p;
        t = t * &c % p;
        r = r * b % p;
    }
    Some(r)
}

/// Primes `≤ n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

pub fn to_big(v: u64) -> BigInt {
    BigInt::from(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn small_primality_matches_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime_u64(n), naive_prime(n), "n = {n}");
            assert_eq!(is_prime(&BigUint::from(n)), naive_prime(n));
        }
    }

    #[test]
    fn strong_pseudoprimes_rejected() {
        // strong pseudoprimes to several small bases
        for n in [2047u64, 1373653, 25326001, 3215031751, 2152302898747, 3474749660383, 341550071728321]
        {
            assert!(!is_prime_u64(n), "{n}");
        }
        assert!(is_prime_u64(18446744073709551557));
    }

    #[test]
    fn big_primality() {
        let m127 = (BigUint::one() << 127) - 1u32;
        assert!(is_prime(&m127));
        let m128 = (BigUint::one() << 128) - 1u32;
        assert!(!is_prime(&m128));
        let p = BigUint::from(1_000_000_007u64);
        let q = BigUint::from(998_244_353u64);
        assert!(!is_prime(&(&p * &q)));
        // 2^89 - 1 is prime, 2^89 + 1 is not; both exceed u64
        let m89 = (BigUint::one() << 89) - 1u32;
        assert!(is_prime(&m89));
        assert!(!is_prime(&(&m89 + 2u32)));
        // past the deterministic Miller–Rabin bound the Lucas leg runs
        let big = (BigUint::one() << 521) - 1u32;
        assert!(is_prime(&big));
        assert!(!is_prime(&(&m127 * &m89)));
    }

    #[test]
    fn lucas_leg_alone() {
        for n in (5..5000u64).step_by(2) {
            let b = BigUint::from(n);
            assert_eq!(strong_lucas_probable_prime(&b), naive_prime(n), "n = {n}");
        }
    }

    #[test]
    fn jacobi_matches_euler_criterion() {
        for p in primes_up_to(200).into_iter().skip(1) {
            for a in -50i64..50 {
                let e = pow_mod_u64(a.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
                let expected = match e {
                    0 => 0,
                    1 => 1,
                    _ => -1,
                };
                assert_eq!(jacobi(&BigInt::from(a), &BigUint::from(p)), expected);
            }
        }
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker_at_prime(-4, &BigUint::from(5u32)), 1);
        assert_eq!(kronecker_at_prime(-4, &BigUint::from(2u32)), 0);
        assert_eq!(kronecker_at_prime(-3, &BigUint::from(5u32)), -1);
        assert_eq!(kronecker_at_prime(-7, &BigUint::from(2u32)), 1);
        assert_eq!(kronecker_at_prime(-3, &BigUint::from(2u32)), -1);
    }

    #[test]
    fn tonelli_shanks() {
        for p in primes_up_to(400).into_iter().skip(1) {
            let pb = BigUint::from(p);
            for a in 0..p {
                match sqrt_mod_prime(&BigInt::from(a), &pb) {
                    Some(r) => assert_eq!(&r * &r % &pb, BigUint::from(a)),
                    None => assert!((0..p).all(|x| x * x % p != a)),
                }
            }
        }
    }

    #[test]
    fn inverse_and_valuation() {
        assert_eq!(mod_inverse(&3.into(), &7.into()), Some(5.into()));
        assert_eq!(mod_inverse(&2.into(), &4.into()), None);
        assert_eq!(split_valuation(&BigUint::from(48u32), &BigUint::from(2u32)), (4, 3u32.into()));
        assert_eq!(valuation_int(&BigInt::from(-250), &BigUint::from(5u32)), 3);
    }
}
