//! Primality and factorization of arbitrary-precision positive integers.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Miller–Rabin with the first 13 prime bases, which is deterministic below
/// 3.3 · 10^24; above that it is a strong probable-prime test.
pub fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &p in &SMALL_PRIMES {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_one = n - 1u32;
    let mut d = n_minus_one.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in SMALL_PRIMES.iter().take(13) {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime(&BigUint::from(n))
}

/// Finds a nontrivial factor of a composite `n` (Brent's cycle variant of
/// Pollard's rho). `n` must be odd, composite and not a perfect power of a
/// small prime.
fn rho_factor(n: &BigUint) -> BigUint {
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        const BATCH: u64 = 64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if g != *n {
            return g;
        }
        c += 1u32;
    }
}

/// Prime factorization as sorted `(prime, exponent)` pairs; `1` factors as
/// the empty product.
pub fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    assert!(!n.is_zero(), "cannot factor zero");
    if let Some(small) = to_u64(n) {
        if let Some(out) = factorize_small(small) {
            return out;
        }
    }
    let mut rest = n.clone();
    let mut primes: Vec<BigUint> = Vec::new();
    for p in 2u32..1000 {
        let bp = BigUint::from(p);
        if &bp * &bp > rest {
            break;
        }
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            primes.push(bp.clone());
        }
    }
    let mut stack = Vec::new();
    if !rest.is_one() {
        stack.push(rest);
    }
    while let Some(m) = stack.pop() {
        if is_prime(&m) {
            primes.push(m);
        } else {
            let d = rho_factor(&m);
            let e = &m / &d;
            stack.push(d);
            stack.push(e);
        }
    }
    primes.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, k)) if *q == p => *k += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

const TRIAL_BOUND: u64 = 1000;

/// Trial division by primes below 1000; `None` when a cofactor of at least
/// `1000²` is left, which may be composite.
fn factorize_small(mut n: u64) -> Option<Vec<(BigUint, u32)>> {
    let mut out = Vec::new();
    let mut p = 2;
    while p < TRIAL_BOUND && p * p <= n {
        let mut k = 0;
        while n.is_multiple_of(p) {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((BigUint::from(p), k));
        }
        p += 1;
    }
    if n > 1 {
        if n >= TRIAL_BOUND * TRIAL_BOUND && p >= TRIAL_BOUND {
            return None;
        }
        out.push((BigUint::from(n), 1));
    }
    Some(out)
}

/// Exponent of the prime `p` in `n` (`n > 0`).
pub fn valuation(n: &BigUint, p: &BigUint) -> u32 {
    let mut n = n.clone();
    let mut k = 0;
    while !n.is_zero() && (&n % p).is_zero() {
        n /= p;
        k += 1;
    }
    k
}

/// The `i`-th prime, counting from `i = 1` for 2.
pub fn nth_prime(i: usize) -> u64 {
    assert!(i >= 1);
    let mut count = 0;
    let mut n = 1u64;
    loop {
        n += 1;
        if is_prime_u64(n) {
            count += 1;
            if count == i {
                return n;
            }
        }
    }
}

pub fn to_u64(n: &BigUint) -> Option<u64> {
    n.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_factor(mut n: u64) -> Vec<(BigUint, u32)> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            if k > 0 {
                out.push((BigUint::from(p), k));
            }
            p += 1;
        }
        if n > 1 {
            out.push((BigUint::from(n), 1));
        }
        out
    }

    #[test]
    fn primality_small() {
        let primes: Vec<u64> = (0..100).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(primes.len(), 25);
        assert!(!is_prime_u64(561));
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(3_215_031_751));
    }

    #[test]
    fn factorization_matches_trial_division() {
        for n in 1u64..3000 {
            assert_eq!(factorize(&BigUint::from(n)), trial_factor(n), "n = {n}");
        }
        for n in [999_999_999_989u64, 600_851_475_143, 1_000_000_007 * 998_244_353, 2u64.pow(40)] {
            assert_eq!(factorize(&BigUint::from(n)), trial_factor(n), "n = {n}");
        }
    }

    #[test]
    fn nth_prime_sequence() {
        assert_eq!(nth_prime(1), 2);
        assert_eq!(nth_prime(5), 11);
        assert_eq!(nth_prime(20), 71);
    }
}
