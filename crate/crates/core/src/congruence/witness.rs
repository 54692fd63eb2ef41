//! Primes p with `a_p = +-(p+1)` modulo lambda^m.

use std::ops::Range;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;

use crate::arith::local_ring::Valuation;
use crate::arith::primes;
use crate::error::{Error, Result};
use crate::hecke::PadicEigenform;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Witness {
    pub p: u64,
    /// +1 or -1.
    pub sign: i8,
    /// Valuation of `a_p - sign (p+1)` in lambda-units.
    pub valuation: Valuation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub ell: u64,
    pub level: u64,
    /// Modulus exponent in lambda-units.
    pub m: u64,
    pub primes: Range<u64>,
    /// Primes in range coprime to l N.
    pub scanned: usize,
    pub witnesses: Vec<Witness>,
}

impl WitnessReport {
    /// Distinct witness primes over primes scanned.
    pub fn density(&self) -> Ratio<u64> {
        let mut ps: Vec<u64> = self.witnesses.iter().map(|w| w.p).collect();
        ps.dedup();
        Ratio::new(ps.len() as u64, (self.scanned as u64).max(1))
    }
}

/// Scan `primes` (skipping p | l N) for `v(a_p -+ (p+1)) >= m`, with m in
/// lambda-units of the eigenform's ring.
pub fn level_raising_witnesses(f: &PadicEigenform, level: u64, m: u64, primes: Range<u64>) -> Result<WitnessReport> {
    let ring = &f.ring;
    if m > ring.lambda_precision() {
        return Err(Error::PrecisionCap { attained: ring.lambda_precision() as u32, needed: m as u32 });
    }
    let bad = f.ell * level;
    let mut scanned = 0;
    let mut witnesses = Vec::new();
    for p in primes::primes_in(primes.start, primes.end) {
        if bad.gcd(&p) != 1 {
            continue;
        }
        let ap = f.coefficient(p).ok_or(Error::BoundExceeded { requested: p, available: f.bound() })?;
        scanned += 1;
        let s = ring.from_int(&BigInt::from(p + 1));
        for (sign, diff) in [(1i8, ap.sub(&s)), (-1, ap.add(&s))] {
            let v = diff.valuation();
            if v.lambda >= m {
                witnesses.push(Witness { p, sign, valuation: v });
            }
        }
    }
    Ok(WitnessReport { ell: f.ell, level, m, primes, scanned, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::local_ring::LocalRing;

    fn synthetic(ell: u64, n: u32, bound: u64, a: impl Fn(u64) -> i64) -> PadicEigenform {
        let ring = LocalRing::base_ring(ell, n).unwrap();
        let coefficients = (1..=bound).map(|k| ring.from_i64(a(k))).collect();
        PadicEigenform { ell, ring, coefficients, rank: 1, attained: n }
    }

    #[test]
    fn a_p_equal_to_p_plus_one() {
        let f = synthetic(5, 3, 60, |p| p as i64 + 1);
        for m in 1..=3 {
            let r = level_raising_witnesses(&f, 1, m, 2..60).unwrap();
            assert_eq!(r.scanned, 16);
            assert!(r.witnesses.iter().filter(|w| w.sign == 1).count() == 16);
        }
    }

    #[test]
    fn zero_coefficients_need_p_congruent_to_minus_one() {
        let f = synthetic(5, 3, 200, |_| 0);
        let r = level_raising_witnesses(&f, 1, 2, 2..200).unwrap();
        let ps: Vec<u64> = r.witnesses.iter().filter(|w| w.sign == 1).map(|w| w.p).collect();
        let expect: Vec<u64> = primes::primes_in(2, 200).into_iter().filter(|p| (p + 1) % 25 == 0).collect();
        assert_eq!(ps, expect);
        assert!(level_raising_witnesses(&f, 1, 4, 2..10).is_err());
        assert!(matches!(level_raising_witnesses(&f, 1, 1, 2..300), Err(Error::BoundExceeded { .. })));
    }
}
