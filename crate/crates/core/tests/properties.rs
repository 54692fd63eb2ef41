//! Property tests for the arithmetic, congruence and record invariants.

mod common;

use std::collections::BTreeMap;

use hecke_core::arith::local_ring::{LocalRing, RingElement, Valuation};
use hecke_core::arith::ring::{PrimeField, PrimePower, Ring};
use hecke_core::congruence::witness::level_raising_witnesses;
use hecke_core::congruence::{
    congruence_exponent_strong, Congruence, CongruenceRecord, IndexPolicy, Kind,
};
use hecke_core::hecke::{ell_adic_orbits, PadicEigenform};
use hecke_core::linalg::field::Echelon;
use hecke_core::store::entities::Entity;
use hecke_core::store::keys::{Endpoint, QOrbitKey};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

const ELLS: [u64; 4] = [2, 3, 5, 7];

fn ring_strategy() -> impl Strategy<Value = LocalRing> {
    (prop::sample::select(ELLS.to_vec()), 1u32..=5, 0usize..3).prop_map(|(ell, n, kind)| {
        let g: Vec<BigInt> = match kind {
            0 => return LocalRing::base_ring(ell, n).unwrap(),
            1 if ell == 2 => vec![1, 1, 1],
            1 => {
                let a = (2..ell as i64).find(|a| (1..ell as i64).all(|x| (x * x - a) % ell as i64 != 0)).unwrap();
                vec![-a, 0, 1]
            }
            _ => vec![-(ell as i64), 0, 1],
        }
        .into_iter()
        .map(BigInt::from)
        .collect();
        LocalRing::new(ell, n, &g, if kind == 1 { 1 } else { 2 }).unwrap()
    })
}

fn element(ring: &LocalRing, seed: &[u64]) -> RingElement {
    let q = ring.base().modulus();
    let coords: Vec<BigInt> = (0..ring.degree()).map(|i| BigInt::from(seed[i % seed.len()] >> i).mod_floor(q)).collect();
    ring.element(&coords)
}

fn eigenform(ring: &LocalRing, seeds: &[u64]) -> PadicEigenform {
    let mut coefficients = vec![ring.from_i64(1)];
    coefficients.extend(seeds.windows(2).map(|w| element(ring, w)));
    PadicEigenform { ell: ring.ell(), ring: ring.clone(), coefficients, rank: ring.degree(), attained: ring.precision() }
}

fn valuation_strategy() -> impl Strategy<Value = Valuation> {
    (0u64..40, 1u32..4, any::<bool>()).prop_map(|(l, e, exact)| if exact { Valuation::exact(l, e) } else { Valuation::at_least(l, e) })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prime_power_ring_laws(ell in prop::sample::select(ELLS.to_vec()), n in 1u32..8, xs in prop::collection::vec(any::<i64>(), 6)) {
        let r = PrimePower::new(ell, n).unwrap();
        let v: Vec<BigInt> = xs.iter().map(|&x| r.from_i64(x)).collect();
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(r.mul(a, &r.add(b, c)), r.add(&r.mul(a, b), &r.mul(a, c)));
        prop_assert_eq!(r.mul(&r.mul(a, b), c), r.mul(a, &r.mul(b, c)));
        prop_assert!(r.is_zero(&r.add(a, &r.neg(a))));
        let naive = v[..3].iter().zip(&v[3..]).fold(r.zero(), |acc, (x, y)| r.add(&acc, &r.mul(x, y)));
        prop_assert_eq!(r.dot(&v[..3], &v[3..]), naive);
        let m = BigInt::from(ell).pow(n);
        prop_assert_eq!(r.from_i64(xs[0]), BigInt::from(xs[0]).mod_floor(&m));
    }

    #[test]
    fn echelon_expresses_the_span(
        ell in prop::sample::select(ELLS.to_vec()),
        vs in prop::collection::vec(prop::collection::vec(0i64..50, 5), 1..7),
        cs in prop::collection::vec(0i64..50, 7),
    ) {
        let f = PrimeField::new(ell).unwrap();
        let vs: Vec<Vec<BigInt>> = vs.iter().map(|v| v.iter().map(|&x| f.from_i64(x)).collect()).collect();
        let mut ech = Echelon::new(&f);
        let mut kept = Vec::new();
        for v in &vs {
            if ech.insert(v) {
                kept.push(v.clone());
            }
        }
        prop_assert_eq!(ech.len(), kept.len());
        let mut target = vec![f.zero(); 5];
        for (v, c) in vs.iter().zip(&cs) {
            for (t, x) in target.iter_mut().zip(v) {
                *t = f.add(t, &f.mul(&f.from_i64(*c), x));
            }
        }
        let coords = ech.express(&target).expect("a combination lies in the span");
        let mut back = vec![f.zero(); 5];
        for (v, c) in kept.iter().zip(&coords) {
            for (t, x) in back.iter_mut().zip(v) {
                *t = f.add(t, &f.mul(c, x));
            }
        }
        prop_assert_eq!(back, target);
    }

    #[test]
    fn strong_congruence_is_symmetric(ring in ring_strategy(), a in prop::collection::vec(any::<u64>(), 9), b in prop::collection::vec(any::<u64>(), 9), shared in 1usize..8) {
        let f = eigenform(&ring, &a);
        let mut g = eigenform(&ring, &b);
        // Share a prefix so the exponent is not always zero.
        for k in 0..shared {
            g.coefficients[k] = f.coefficients[k].clone();
        }
        let fg = congruence_exponent_strong(&f, &g, 8, IndexPolicy::All).unwrap();
        let gf = congruence_exponent_strong(&g, &f, 8, IndexPolicy::All).unwrap();
        prop_assert_eq!(fg.exponent, gf.exponent);
        let ff = congruence_exponent_strong(&f, &f, 8, IndexPolicy::All).unwrap();
        prop_assert!(!ff.exponent.is_exact());
        prop_assert_eq!(ff.exponent.lambda, ring.lambda_precision());
        prop_assert!(fg.exponent.normalised() <= ff.exponent.normalised());
    }

    #[test]
    fn witnesses_are_exactly_the_qualifying_primes(ring in ring_strategy(), a in prop::collection::vec(any::<u64>(), 31), m in 0u64..4, level in prop::sample::select(vec![11u64, 13, 37])) {
        let f = eigenform(&ring, &a);
        let m = m.min(ring.lambda_precision());
        let report = level_raising_witnesses(&f, level, m, 2..f.bound() + 1).unwrap();
        let mut scanned = 0;
        for p in (2..=f.bound()).filter(|&p| (2..p).all(|d| p % d != 0)) {
            if p == ring.ell() || level % p == 0 {
                continue;
            }
            scanned += 1;
            let ap = f.coefficient(p).unwrap();
            for sign in [1i8, -1] {
                let s = ring.from_i64(sign as i64 * (p as i64 + 1));
                let v = ap.sub(&s).valuation();
                let listed = report.witnesses.iter().find(|w| (w.p, w.sign) == (p, sign));
                prop_assert_eq!(listed.is_some(), v.lambda >= m, "p={} sign={} v={}", p, sign, v);
                if let Some(w) = listed {
                    prop_assert_eq!(w.valuation, v);
                }
            }
        }
        prop_assert_eq!(report.scanned, scanned);
    }

    #[test]
    fn congruence_records_round_trip(
        level in 1u64..500, weight in 2u32..13, number in 1u32..9,
        ell in prop::sample::select(ELLS.to_vec()), i in 1u32..4, j in 1u32..4,
        strong in any::<bool>(), exponent in valuation_strategy(),
        breakdown in prop::collection::btree_map(1u64..30, valuation_strategy(), 1..6),
        policy_modulus in prop::option::of(2u64..1000),
    ) {
        let q = QOrbitKey::new(level, weight, number);
        let left = Endpoint::Eigenform(q.orbit(ell, i).eigenform(j));
        let right = if strong { Endpoint::Eigenform(q.orbit(ell, j).eigenform(i)) } else { Endpoint::Orbit(q.orbit(ell, j)) };
        let policy = policy_modulus.map_or(IndexPolicy::All, IndexPolicy::CoprimeTo);
        let bound = *breakdown.keys().last().unwrap();
        let congruence = Congruence {
            kind: if strong { Kind::Strong } else { Kind::Weak },
            exponent,
            bound,
            precision: 4,
            policy,
            breakdown: breakdown.into_iter().collect::<BTreeMap<_, _>>(),
        };
        let rec = CongruenceRecord::new(left, right, congruence).unwrap();
        let text = rec.to_text();
        let back = CongruenceRecord::parse(&text, "prop").unwrap();
        prop_assert_eq!(&back, &rec);
        prop_assert_eq!(back.to_text(), text);
        prop_assert_eq!(left.to_string().parse::<Endpoint>().unwrap(), left);
        prop_assert_eq!(right.to_string().parse::<Endpoint>().unwrap(), right);
    }
}

// Decomposing at precision N and reducing to M agrees with decomposing at M.
#[test]
fn reduction_is_consistent_across_precisions() {
    for (name, space) in common::corpus() {
        for ell in ELLS {
            let high = ell_adic_orbits(&space, ell, 5).unwrap();
            for low_n in 1..5 {
                let low = ell_adic_orbits(&space, ell, low_n).unwrap();
                assert_eq!(high.len(), low.len(), "{name} at {ell}");
                let r = PrimePower::new(ell, low_n).unwrap();
                let red = |rows: &[Vec<BigInt>]| -> Vec<Vec<BigInt>> {
                    rows.iter().map(|row| row.iter().map(|x| r.reduce(x)).collect()).collect()
                };
                for (h, l) in high.iter().zip(&low) {
                    assert_eq!(h.fingerprint, l.fingerprint, "{name} at {ell}");
                    assert_eq!(h.basis_indices, l.basis_indices, "{name} at {ell}");
                    assert_eq!(red(&h.table), l.table, "{name} at {ell}^{low_n}");
                    assert_eq!(red(&h.factor.basis), l.factor.basis, "{name} at {ell}^{low_n}");
                }
            }
        }
    }
}
