//! Small-prime utilities (trial division is plenty at the sizes handled here).

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes `p` with `lo <= p < hi`.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..hi).filter(|&p| is_prime(p)).collect()
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Factorisation as (prime, exponent) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in prime_divisors(n) {
        let mut k = 0;
        while n % p == 0 {
            n /= p;
            k += 1;
        }
        out.push((p, k));
    }
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        assert_eq!(primes_in(0, 30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(!is_prime(1) && !is_prime(91) && is_prime(97));
        assert_eq!(prime_divisors(360), vec![2, 3, 5]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
    }
}
