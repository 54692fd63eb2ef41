//! Test corpus shared by the integration tests: Hecke systems given as
//! multiplication on an order Z[x]/(g), plus the level-11 data.
#![allow(dead_code)]

use std::collections::BTreeMap;

use hecke_core::arith::primes::factorize;
use hecke_core::hecke::{level11, HeckeSpace};
use hecke_core::linalg::Mat;
use num_bigint::BigInt;

/// Integer polynomial arithmetic modulo a monic `g`, written out here so the
/// corpus does not depend on the library's polynomial code.
fn mul_mod(a: &[BigInt], b: &[BigInt], g: &[i64]) -> Vec<BigInt> {
    let d = g.len() - 1;
    let mut prod = vec![BigInt::from(0); a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    for k in (d..prod.len()).rev() {
        let c = prod[k].clone();
        if c != BigInt::from(0) {
            for (i, gi) in g.iter().enumerate() {
                prod[k - d + i] -= &c * gi;
            }
        }
    }
    prod.truncate(d);
    prod.resize(d, BigInt::from(0));
    prod
}

fn sub_scaled(a: &[BigInt], b: &[BigInt], c: &BigInt) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x - c * y).collect()
}

/// One eigensystem with values in Z[x]/(g): `a_p(x)` for primes, extended
/// by the weight-`weight` Hecke recursion and multiplicativity.
pub struct OrderSystem {
    pub level: u64,
    pub weight: u32,
    pub g: Vec<i64>,
    pub ap: fn(u64) -> Vec<i64>,
}

impl OrderSystem {
    pub fn degree(&self) -> usize {
        self.g.len() - 1
    }

    fn poly(&self, c: &[i64]) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        v.resize(self.degree(), BigInt::from(0));
        v
    }

    /// `a_n` as a polynomial in x of degree < deg g.
    pub fn coefficient(&self, n: u64) -> Vec<BigInt> {
        let mut acc = self.poly(&[1]);
        for (p, k) in factorize(n) {
            let ap = self.poly(&(self.ap)(p));
            let (mut prev, mut cur) = (self.poly(&[1]), ap.clone());
            for _ in 1..k {
                let next = if self.level % p == 0 {
                    mul_mod(&cur, &ap, &self.g)
                } else {
                    sub_scaled(&mul_mod(&ap, &cur, &self.g), &prev, &BigInt::from(p).pow(self.weight - 1))
                };
                prev = cur;
                cur = next;
            }
            acc = mul_mod(&acc, &cur, &self.g);
        }
        acc
    }

    /// Matrix of multiplication by `a` on the basis 1, x, ..., x^{d-1}.
    pub fn mult_matrix(&self, a: &[BigInt]) -> Mat<BigInt> {
        let d = self.degree();
        let cols: Vec<Vec<BigInt>> = (0..d)
            .map(|j| {
                let mut xj = vec![BigInt::from(0); d];
                xj[j] = BigInt::from(1);
                mul_mod(a, &xj, &self.g)
            })
            .collect();
        Mat::from_cols(&cols)
    }

    pub fn space(&self, bound: u64) -> HeckeSpace {
        let matrices = (1..=bound).map(|n| self.mult_matrix(&self.coefficient(n))).collect();
        let mut meta = BTreeMap::new();
        meta.insert("new".to_string(), self.degree().to_string());
        HeckeSpace::new(
            self.level,
            self.weight,
            self.degree(),
            matrices,
            Some(format!("multiplication on Z[x]/({})", show_poly(&self.g))),
            meta,
        )
        .expect("corpus space")
    }
}

fn show_poly(g: &[i64]) -> String {
    let parts: Vec<String> = g.iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// a_p = x + c with a small varying integer c.
fn linear_ap(p: u64) -> Vec<i64> {
    vec![(p * 7 % 11) as i64 - 5, 1]
}

/// a_p = c + d x with both varying.
fn mixed_ap(p: u64) -> Vec<i64> {
    vec![(p * 3 % 7) as i64 - 3, (p % 3) as i64 + 1]
}

fn quadratic_ap(p: u64) -> Vec<i64> {
    vec![(p % 5) as i64 - 2, (p % 4) as i64 - 1, 1]
}

/// The corpus spaces, all with Hecke algebra of Z-rank d (multiplicity
/// one), and their bound.
pub fn corpus() -> Vec<(String, HeckeSpace)> {
    let bound = 40;
    let mut out = vec![("level 11".to_string(), level11::space(bound).unwrap())];
    let systems = [
        ("(x-1)(x-126)", OrderSystem { level: 11, weight: 4, g: vec![126, -127, 1], ap: linear_ap }),
        ("(x-2)(x-27)", OrderSystem { level: 11, weight: 6, g: vec![54, -29, 1], ap: linear_ap }),
        ("x^2-6", OrderSystem { level: 13, weight: 2, g: vec![-6, 0, 1], ap: linear_ap }),
        ("x^2-5", OrderSystem { level: 17, weight: 2, g: vec![-5, 0, 1], ap: mixed_ap }),
        ("x^2+1", OrderSystem { level: 19, weight: 2, g: vec![1, 0, 1], ap: mixed_ap }),
        ("x^2+x-1", OrderSystem { level: 23, weight: 2, g: vec![-1, 1, 1], ap: linear_ap }),
        ("x^3-x-1", OrderSystem { level: 29, weight: 2, g: vec![-1, -1, 0, 1], ap: quadratic_ap }),
        ("(x^2-2)(x-3)", OrderSystem { level: 31, weight: 2, g: vec![6, -2, -3, 1], ap: quadratic_ap }),
    ];
    for (name, s) in systems {
        out.push((name.to_string(), s.space(bound)));
    }
    out
}

/// Three spaces at l = 5 giving Z_5-orbits with 2, 2 and 1 eigenforms:
/// 10 strong and 10 weak pairs.
pub fn sweep_corpus() -> Vec<HeckeSpace> {
    let bound = 24;
    vec![
        level11::space(bound).unwrap(),
        OrderSystem { level: 11, weight: 4, g: vec![126, -127, 1], ap: linear_ap }.space(bound),
        OrderSystem { level: 11, weight: 6, g: vec![54, -29, 1], ap: linear_ap }.space(bound),
    ]
}

/// #E(F_p) for y^2 + y = x^3 - x^2 - 10x - 20 by counting every pair.
pub fn naive_point_count(p: i64) -> i64 {
    let mut n = 1;
    for x in 0..p {
        let rhs = (x * x % p * x - x * x - 10 * x - 20).rem_euclid(p);
        for y in 0..p {
            if (y * y + y).rem_euclid(p) == rhs {
                n += 1;
            }
        }
    }
    n
}
