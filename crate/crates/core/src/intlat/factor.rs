//! Integer factorization for invariant factors: trial division, then
//! Miller-Rabin and Pollard-Brent on whatever cofactor remains.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

const TRIAL_BOUND: u64 = 10_000;
const WITNESSES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Prime factorization of `n > 0` as sorted `(prime, exponent)` pairs.
/// Returns `None` if Pollard-Brent fails to split a composite cofactor.
pub fn factorize(n: &BigInt) -> Option<Vec<(BigInt, u32)>> {
    assert!(n.is_positive());
    let mut rest = n.clone();
    let mut primes: Vec<BigInt> = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_BOUND && !rest.is_one() {
        let bp = BigInt::from(p);
        if &bp * &bp > rest {
            break;
        }
        while rest.is_multiple_of(&bp) {
            rest /= &bp;
            primes.push(bp.clone());
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            primes.push(m);
            continue;
        }
        let d = pollard_brent(&m)?;
        stack.push(&m / &d);
        stack.push(d);
    }
    primes.sort();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    for q in primes {
        match out.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    Some(out)
}

pub fn is_probable_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    for &w in &WITNESSES {
        let w = BigInt::from(w);
        if *n == w {
            return true;
        }
        if n.is_multiple_of(&w) {
            return false;
        }
    }
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let mut d = n_minus_1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for &w in &WITNESSES {
        let mut x = BigInt::from(w).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigInt) -> Option<BigInt> {
    if n.is_even() {
        return Some(BigInt::from(2));
    }
    for c in 1u32..64 {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let (mut x, mut y) = (BigInt::from(2), BigInt::from(2));
        let mut d = BigInt::one();
        let mut steps = 0u64;
        while d.is_one() && steps < 1_000_000 {
            x = f(&x);
            y = f(&f(&y));
            d = (&x - &y).abs().gcd(n);
            steps += 1;
        }
        if !d.is_one() && &d != n && !d.is_zero() {
            return Some(d);
        }
    }
    None
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(x: &BigInt, p: &BigInt) -> u32 {
    debug_assert!(!x.is_zero());
    let mut x = x.abs();
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

pub fn pow(p: &BigInt, e: u32) -> BigInt {
    num_traits::pow(p.clone(), e.to_usize().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorizations() {
        let f = factorize(&BigInt::from(360)).unwrap();
        let f: Vec<(i64, u32)> = f.into_iter().map(|(p, e)| (p.try_into().unwrap(), e)).collect();
        assert_eq!(f, vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(&BigInt::from(1)).unwrap(), vec![]);
    }

    #[test]
    fn large_semiprime_splits() {
        let p = BigInt::from(1_000_003u64);
        let q = BigInt::from(998_244_353u64);
        let f = factorize(&(&p * &q)).unwrap();
        assert_eq!(f, vec![(p, 1), (q, 1)]);
    }
}
