use crate::arith::primes::prime_divisors;

/// `ceil(k/12 * N * prod_{p | N} (1 + 1/p))`, the Sturm bound for
/// weight-k forms on Gamma_0(N).
pub fn sturm_bound(level: u64, weight: u32) -> u64 {
    let mut num = weight as u128 * level as u128;
    let mut den = 12u128;
    for p in prime_divisors(level) {
        num *= p as u128 + 1;
        den *= p as u128;
    }
    num.div_ceil(den) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_levels() {
        assert_eq!(sturm_bound(1, 12), 1);
        assert_eq!(sturm_bound(11, 2), 2);
        assert_eq!(sturm_bound(2, 2), 1);
        // index of Gamma_0(36) is 36 * 3/2 * 4/3 = 72
        assert_eq!(sturm_bound(36, 4), 24);
    }
}
