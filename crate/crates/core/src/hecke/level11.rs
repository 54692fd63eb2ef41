//! Genuine weight-2 level-11 Hecke data from point counts on the curve
//! y^2 + y = x^3 - x^2 - 10x - 20, which has conductor 11.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::space::HeckeSpace;
use crate::arith::primes::{factorize, is_prime};
use crate::error::Result;
use crate::linalg::Mat;

pub const LEVEL: u64 = 11;
pub const PROVENANCE: &str = "point counts on y^2 + y = x^3 - x^2 - 10x - 20";

fn rhs(x: i64, p: i64) -> i64 {
    (x * x % p * x - x * x - 10 * x - 20).rem_euclid(p)
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Number of points over F_p, including the point at infinity.
pub fn point_count(p: u64) -> u64 {
    assert!(is_prime(p), "{p} is not prime");
    let pi = p as i64;
    if p == 2 {
        let mut n = 1;
        for x in 0..2 {
            for y in 0..2 {
                if (y * y + y - rhs(x, 2)).rem_euclid(2) == 0 {
                    n += 1;
                }
            }
        }
        return n;
    }
    // (2y + 1)^2 = 4 rhs(x) + 1: count square roots with Euler's criterion.
    let mut n = 1;
    for x in 0..pi {
        let d = ((4 * rhs(x, pi) + 1).rem_euclid(pi)) as u64;
        n += if d == 0 {
            1
        } else if pow_mod(d, (p - 1) / 2, p) == 1 {
            2
        } else {
            0
        };
    }
    n
}

/// `a_p = p + 1 - #E(F_p)`; the curve has split multiplicative reduction
/// at 11, so `a_11 = 1`.
pub fn trace_of_frobenius(p: u64) -> i64 {
    if p == LEVEL {
        return 1;
    }
    p as i64 + 1 - point_count(p) as i64
}

/// `a_1..a_bound` of the newform of level 11.
pub fn coefficients(bound: u64) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(bound as usize);
    for n in 1..=bound {
        let mut a = BigInt::from(1);
        for (p, k) in factorize(n) {
            let ap = BigInt::from(trace_of_frobenius(p));
            let (mut prev, mut cur) = (BigInt::from(1), ap.clone());
            for _ in 1..k {
                let next = if p == LEVEL { &cur * &ap } else { &ap * &cur - BigInt::from(p) * &prev };
                prev = cur;
                cur = next;
            }
            a *= cur;
        }
        out.push(a);
    }
    out
}

/// The one-dimensional space S_2(Gamma_0(11)) with T_n = (a_n).
pub fn space(bound: u64) -> Result<HeckeSpace> {
    let matrices = coefficients(bound).into_iter().map(|a| Mat::from_vec(1, 1, vec![a])).collect();
    HeckeSpace::new(LEVEL, 2, 1, matrices, Some(PROVENANCE.to_string()), BTreeMap::new())
}
