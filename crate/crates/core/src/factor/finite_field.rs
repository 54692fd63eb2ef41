//! Factorisation of univariate polynomials over F_l: squarefree
//! decomposition, distinct-degree splitting, then Cantor-Zassenhaus
//! equal-degree splitting with a seeded generator so results are repeatable.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::poly::{self, Poly};
use crate::arith::ring::{PrimeField, Ring};

type P = Poly<BigInt>;

/// Full factorisation of a nonzero polynomial into monic irreducibles with
/// multiplicities, in canonical order (degree, then coefficients from the
/// top down). The leading coefficient is dropped.
pub fn factor(f: &PrimeField, p: &[BigInt]) -> Vec<(P, u32)> {
    let p = poly::make_monic(f, &poly::trim(f, p.to_vec()));
    let mut out: Vec<(P, u32)> = Vec::new();
    for (sq, mult) in squarefree(f, &p) {
        for (part, d) in distinct_degree(f, &sq) {
            for irr in equal_degree(f, &part, d) {
                out.push((irr, mult));
            }
        }
    }
    out.sort_by(|a, b| canonical_cmp(&a.0, &b.0));
    out
}

/// Order on monic polynomials: degree first, then coefficients from the top.
pub fn canonical_cmp(a: &[BigInt], b: &[BigInt]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

pub fn is_irreducible(f: &PrimeField, p: &[BigInt]) -> bool {
    let fac = factor(f, p);
    fac.len() == 1 && fac[0].1 == 1
}

/// Product of the distinct irreducible factors.
pub fn radical(f: &PrimeField, p: &[BigInt]) -> P {
    let mut acc = vec![f.one()];
    for (q, _) in factor(f, p) {
        acc = poly::mul(f, &acc, &q);
    }
    acc
}

/// Squarefree decomposition: pairs (squarefree part, multiplicity) with the
/// parts pairwise coprime.
pub fn squarefree(f: &PrimeField, p: &[BigInt]) -> Vec<(P, u32)> {
    let ell = f.ell();
    let mut out = Vec::new();
    if poly::degree(p).unwrap_or(0) == 0 {
        return out;
    }
    let d = poly::derivative(f, p);
    if d.is_empty() {
        // p = q(x^l); q(x)^l has the same roots since the field is perfect.
        for (q, m) in squarefree(f, &pth_root(f, p)) {
            out.push((q, m * ell as u32));
        }
        return out;
    }
    let mut c = poly::gcd(f, p, &d);
    let mut w = poly::divrem(f, p, &c).0;
    let mut i = 1u32;
    while poly::degree(&w).unwrap_or(0) > 0 {
        let y = poly::gcd(f, &w, &c);
        let z = poly::divrem(f, &w, &y).0;
        if poly::degree(&z).unwrap_or(0) > 0 {
            out.push((poly::make_monic(f, &z), i));
        }
        i += 1;
        w = y;
        c = poly::divrem(f, &c, &w).0;
    }
    if poly::degree(&c).unwrap_or(0) > 0 {
        for (q, m) in squarefree(f, &pth_root(f, &c)) {
            out.push((q, m * ell as u32));
        }
    }
    out
}

fn pth_root(f: &PrimeField, p: &[BigInt]) -> P {
    let ell = f.ell() as usize;
    // Coefficients are fixed by Frobenius on F_l.
    let out = p.iter().step_by(ell).cloned().collect();
    poly::make_monic(f, &poly::trim(f, out))
}

/// Distinct-degree factorisation of a squarefree monic polynomial.
pub fn distinct_degree(f: &PrimeField, p: &[BigInt]) -> Vec<(P, usize)> {
    let ell = BigUint::from(f.ell());
    let x = vec![f.zero(), f.one()];
    let mut rest = p.to_vec();
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut d = 0;
    while poly::degree(&rest).unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = poly::powmod(f, &h, &ell, &rest);
        let g = poly::gcd(f, &poly::sub(f, &h, &x), &rest);
        if poly::degree(&g).unwrap_or(0) > 0 {
            rest = poly::divrem(f, &rest, &g).0;
            h = poly::rem_monic(f, &h, &rest);
            out.push((g, d));
        }
    }
    if let Some(deg) = poly::degree(&rest) {
        if deg > 0 {
            out.push((poly::make_monic(f, &rest), deg));
        }
    }
    out
}

/// Split a squarefree monic polynomial whose irreducible factors all have
/// degree `d`.
pub fn equal_degree(f: &PrimeField, p: &[BigInt], d: usize) -> Vec<P> {
    let n = poly::degree(p).unwrap_or(0);
    if n == d {
        return vec![p.to_vec()];
    }
    let seed = p.iter().fold(0xC0FF_EE00u64, |acc, c| {
        acc.wrapping_mul(1_000_003).wrapping_add(c.iter_u64_digits().next().unwrap_or(0))
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (d as u64) << 32);
    let ell = f.ell();
    loop {
        let a: P = poly::trim(f, (0..n).map(|_| BigInt::from(rng.gen_range(0..ell))).collect());
        if poly::degree(&a).unwrap_or(0) == 0 {
            continue;
        }
        let g = if ell == 2 {
            // Trace map a + a^2 + ... + a^{2^{d-1}} splits over F_2.
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = poly::mulmod(f, &t, &t, p);
                acc = poly::add(f, &acc, &t);
            }
            poly::gcd(f, &acc, p)
        } else {
            let e = (num_traits::pow(BigUint::from(ell), d) - BigUint::one()) / BigUint::from(2u8);
            let b = poly::powmod(f, &a, &e, p);
            poly::gcd(f, &poly::sub(f, &b, &[f.one()]), p)
        };
        let dg = poly::degree(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = poly::divrem(f, p, &g).0;
            let mut out = equal_degree(f, &g, d);
            out.extend(equal_degree(f, &poly::make_monic(f, &h), d));
            return out;
        }
    }
}

/// Roots in F_l of a nonzero polynomial (distinct, ascending).
pub fn roots(f: &PrimeField, p: &[BigInt]) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = factor(f, p)
        .into_iter()
        .filter(|(q, _)| q.len() == 2)
        .map(|(q, _)| f.neg(&q[0]))
        .collect();
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_roots(ell: u64, p: &[BigInt]) -> Vec<BigInt> {
        let f = PrimeField::new(ell).unwrap();
        (0..ell).map(BigInt::from).filter(|x| f.is_zero(&poly::eval(&f, p, x))).collect()
    }

    #[test]
    fn x2_minus_6_splits_mod_5() {
        let f = PrimeField::new(5).unwrap();
        let p = poly::from_i64(&f, &[-6, 0, 1]);
        let fac = factor(&f, &p);
        assert_eq!(fac, vec![(poly::from_i64(&f, &[1, 1]), 1), (poly::from_i64(&f, &[-1, 1]), 1)]);
    }

    #[test]
    fn repeated_and_inseparable_factors() {
        let f = PrimeField::new(3).unwrap();
        // x^6 + 2 = (x^2 - 1)^3 over F_3
        let p = poly::from_i64(&f, &[2, 0, 0, 0, 0, 0, 1]);
        let fac = factor(&f, &p);
        assert_eq!(fac, vec![(poly::from_i64(&f, &[1, 1]), 3), (poly::from_i64(&f, &[2, 1]), 3)]);
    }

    proptest! {
        #[test]
        fn product_of_factors_recovers_input(ell in prop::sample::select(vec![2u64, 3, 5, 7]),
                                             coeffs in prop::collection::vec(0i64..7, 1..8)) {
            let f = PrimeField::new(ell).unwrap();
            let mut p = poly::from_i64(&f, &coeffs);
            p.push(f.one());
            let fac = factor(&f, &p);
            let mut prod = vec![f.one()];
            for (q, m) in &fac {
                prop_assert!(is_irreducible_by_ddf(&f, q));
                prod = poly::mul(&f, &prod, &poly::pow(&f, q, *m as u64));
            }
            prop_assert_eq!(prod, p.clone());
            prop_assert_eq!(roots(&f, &p), brute_roots(ell, &p));
        }
    }

    fn is_irreducible_by_ddf(f: &PrimeField, q: &[BigInt]) -> bool {
        // Independent check: no factor of degree <= deg/2 divides q, tested by
        // gcd with x^{l^k} - x.
        let n = poly::degree(q).unwrap();
        let x = vec![f.zero(), f.one()];
        let mut h = x.clone();
        for _ in 1..=n / 2 {
            h = poly::powmod(f, &h, &BigUint::from(f.ell()), q);
            if poly::degree(&poly::gcd(f, &poly::sub(f, &h, &x), q)).unwrap_or(0) > 0 {
                return false;
            }
        }
        true
    }
}
