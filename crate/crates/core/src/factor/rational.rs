//! Factorisation over Q of integer polynomials: squarefree decomposition,
//! factorisation modulo a good prime, Hensel lifting, and recombination of
//! modular factors (Zassenhaus).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::finite_field;
use crate::arith::poly::{self, Poly};
use crate::arith::primes::is_prime;
use crate::arith::ring::{Integers, PrimeField, PrimePower, Rationals, Ring};

type P = Poly<BigInt>;

pub fn content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

/// Primitive part with positive leading coefficient.
pub fn primitive_part(p: &[BigInt]) -> P {
    let c = content(p);
    if c.is_zero() {
        return Vec::new();
    }
    let sign = if p.last().is_some_and(|x| x.is_negative()) { -BigInt::one() } else { BigInt::one() };
    let d = c * sign;
    p.iter().map(|x| x / &d).collect()
}

fn to_rational(p: &[BigInt]) -> Poly<BigRational> {
    p.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn from_rational(p: &[BigRational]) -> P {
    let den = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: P = p.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    primitive_part(&ints)
}

/// Squarefree decomposition over Q (Yun): primitive parts with multiplicity.
pub fn squarefree(p: &[BigInt]) -> Vec<(P, u32)> {
    let q = Rationals;
    let f = to_rational(&poly::trim(&Integers, p.to_vec()));
    let mut out = Vec::new();
    if poly::degree(&f).unwrap_or(0) == 0 {
        return out;
    }
    let df = poly::derivative(&q, &f);
    let a0 = poly::gcd(&q, &f, &df);
    let mut b = poly::divrem(&q, &f, &a0).0;
    let mut c = poly::divrem(&q, &df, &a0).0;
    let mut d = poly::sub(&q, &c, &poly::derivative(&q, &b));
    let mut i = 1;
    while poly::degree(&b).unwrap_or(0) > 0 {
        let a = poly::gcd(&q, &b, &d);
        if poly::degree(&a).unwrap_or(0) > 0 {
            out.push((from_rational(&a), i));
        }
        b = poly::divrem(&q, &b, &a).0;
        c = poly::divrem(&q, &d, &a).0;
        d = poly::sub(&q, &c, &poly::derivative(&q, &b));
        i += 1;
    }
    out
}

/// Irreducible factors over Q of a nonzero integer polynomial, as primitive
/// integer polynomials with positive leading coefficient and multiplicities,
/// in canonical order (degree, then coefficients from the top).
pub fn factor(p: &[BigInt]) -> Vec<(P, u32)> {
    let mut out = Vec::new();
    for (sq, m) in squarefree(p) {
        for g in factor_squarefree(&sq) {
            out.push((g, m));
        }
    }
    out.sort_by(|a, b| finite_field::canonical_cmp(&a.0, &b.0));
    out
}

fn factor_squarefree(f: &[BigInt]) -> Vec<P> {
    let n = poly::degree(f).unwrap_or(0);
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let lc = f.last().unwrap().clone();
    // A prime keeping the degree and squarefreeness.
    let mut pr = 3u64;
    let fl = loop {
        if is_prime(pr) && !(&lc % BigInt::from(pr)).is_zero() {
            let fl = PrimeField::new(pr).unwrap();
            let fbar: P = f.iter().map(|c| fl.reduce(c)).collect();
            let g = poly::gcd(&fl, &fbar, &poly::derivative(&fl, &fbar));
            if poly::degree(&g) == Some(0) {
                break fl;
            }
        }
        pr += 2;
    };
    let fbar: P = f.iter().map(|c| fl.reduce(c)).collect();
    let modular: Vec<P> = finite_field::factor(&fl, &fbar).into_iter().map(|(g, _)| g).collect();
    if modular.len() == 1 {
        return vec![f.to_vec()];
    }
    // Mignotte: coefficients of any factor are bounded by 2^n |f|_2; the
    // scaled candidate lc * g has coefficients up to |lc| times that.
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let norm = norm2.sqrt() + BigInt::one();
    let bound = (BigInt::one() << n) * norm * lc.abs() * 2;
    let mut k = 1u32;
    let mut pk = BigInt::from(pr);
    while pk <= bound {
        pk *= pr;
        k += 1;
    }
    let ring = PrimePower::new(pr, k).unwrap();
    let mut lifted = multifactor_lift(&ring, f, &modular);
    let mut rest = f.to_vec();
    let mut out = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = false;
        for subset in subsets(lifted.len(), size) {
            let lcr = rest.last().unwrap().clone();
            let mut cand = vec![ring.reduce(&lcr)];
            for &i in &subset {
                cand = poly::mul(&ring, &cand, &lifted[i]);
            }
            let cand: P = cand.iter().map(|c| ring.symmetric(c)).collect();
            let g = primitive_part(&cand);
            if let Some(q) = exact_divide(&rest, &g) {
                out.push(g);
                rest = q;
                let keep: Vec<P> =
                    lifted.iter().enumerate().filter(|(i, _)| !subset.contains(i)).map(|(_, g)| g.clone()).collect();
                lifted = keep;
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    out.push(primitive_part(&rest));
    out
}

/// Division in Z[x] when exact.
fn exact_divide(a: &[BigInt], b: &[BigInt]) -> Option<P> {
    let q = Rationals;
    let (quo, rem) = poly::divrem(&q, &to_rational(a), &to_rational(b));
    if !rem.is_empty() || !quo.iter().all(|c| c.is_integer()) {
        return None;
    }
    Some(quo.iter().map(|c| c.to_integer()).collect())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Lift `f = lc * prod(g_i) mod p` to monic factors modulo `p^k`.
fn multifactor_lift(ring: &PrimePower, f: &[BigInt], factors: &[P]) -> Vec<P> {
    let mut out = Vec::new();
    let mut rest: P = f.iter().map(|c| ring.reduce(c)).collect();
    for (i, g) in factors.iter().enumerate() {
        if i + 1 == factors.len() {
            let lc = rest.last().unwrap().clone();
            let inv = ring.inv(&lc).unwrap();
            out.push(poly::scale(ring, &rest, &inv));
            break;
        }
        let (gl, hl) = lift_pair(ring, &rest, g);
        out.push(gl);
        rest = hl;
    }
    out
}

/// Two-factor Hensel lifting: given `f = g * h mod p` with `g` monic and
/// coprime to `h`, return `(G, H)` with `f = G H mod p^k`, `G` monic.
fn lift_pair(ring: &PrimePower, f: &[BigInt], g0: &[BigInt]) -> (P, P) {
    let fl = ring.residue_field();
    let fbar: P = poly::trim(&fl, f.iter().map(|c| fl.reduce(c)).collect());
    let h0 = poly::divrem(&fl, &fbar, g0).0;
    let (one, s, t) = poly::xgcd(&fl, g0, &h0);
    debug_assert_eq!(one, vec![fl.one()]);
    let mut g: P = g0.to_vec();
    let mut h: P = h0.clone();
    let ell = BigInt::from(ring.ell());
    let mut pj = ell.clone();
    for _ in 1..ring.precision() {
        let gh = poly::mul(ring, &g, &h);
        let diff = poly::sub(ring, f, &gh);
        let e: P = poly::trim(&fl, diff.iter().map(|c| fl.reduce(&(c / &pj))).collect());
        if !e.is_empty() {
            let te = poly::mul(&fl, &t, &e);
            let (q, dg) = poly::divrem_monic(&fl, &te, g0);
            let dh = poly::add(&fl, &poly::mul(&fl, &s, &e), &poly::mul(&fl, &q, &h0));
            g = poly::add(ring, &g, &poly::scale(ring, &dg, &pj));
            h = poly::add(ring, &h, &poly::scale(ring, &dh, &pj));
        }
        pj *= &ell;
    }
    (g, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(c: &[i64]) -> P {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn factors_known_polynomials() {
        // x^4 - 1 = (x - 1)(x + 1)(x^2 + 1)
        let f = factor(&z(&[-1, 0, 0, 0, 1]));
        assert_eq!(f, vec![(z(&[-1, 1]), 1), (z(&[1, 1]), 1), (z(&[1, 0, 1]), 1)]);
        // x^4 + 1 is irreducible over Q but splits modulo every prime.
        assert_eq!(factor(&z(&[1, 0, 0, 0, 1])), vec![(z(&[1, 0, 0, 0, 1]), 1)]);
        // (2x + 1)^2 (x^2 - 2)
        let p = poly::mul(&Integers, &poly::pow(&Integers, &z(&[1, 2]), 2), &z(&[-2, 0, 1]));
        assert_eq!(factor(&p), vec![(z(&[1, 2]), 2), (z(&[-2, 0, 1]), 1)]);
    }

    proptest! {
        #[test]
        fn product_recovers_primitive_input(a in prop::collection::vec(-5i64..6, 2..4),
                                            b in prop::collection::vec(-5i64..6, 2..4)) {
            let (mut a, mut b) = (z(&a), z(&b));
            *a.last_mut().unwrap() = BigInt::one();
            *b.last_mut().unwrap() = BigInt::one();
            let p = poly::mul(&Integers, &a, &b);
            let fac = factor(&p);
            let mut prod = vec![BigInt::one()];
            for (g, m) in &fac {
                prod = poly::mul(&Integers, &prod, &poly::pow(&Integers, g, *m as u64));
            }
            prop_assert_eq!(prod, p);
            prop_assert!(fac.len() >= 2 || fac.iter().map(|x| x.1).sum::<u32>() >= 2);
        }
    }
}
