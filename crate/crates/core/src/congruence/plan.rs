//! Per-pair preparation for congruence computations. A plan does all the
//! work shared between coefficient indices, after which each index is an
//! independent item, which is the unit the sweep deduplicates.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{assemble, Congruence, IndexPolicy, Kind};
use crate::algebra::Order;
use crate::arith::local_ring::{LocalRing, RingElement, Valuation};
use crate::arith::poly;
use crate::arith::ring::{Integers, PrimePower, Rationals};
use crate::error::{Error, Result};
use crate::hecke::{EllAdicOrbit, PadicEigenform};
use crate::linalg::{field, integer};

/// What a weak comparison needs from an l-adic orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualTable {
    pub ell: u64,
    pub precision: u32,
    pub basis_indices: Vec<u64>,
    /// Row n-1: `a_{n,1..r}`.
    pub table: Vec<Vec<BigInt>>,
}

impl DualTable {
    pub fn bound(&self) -> u64 {
        self.table.len() as u64
    }
}

impl From<&EllAdicOrbit> for DualTable {
    fn from(o: &EllAdicOrbit) -> Self {
        DualTable { ell: o.ell, precision: o.precision, basis_indices: o.basis_indices.clone(), table: o.table.clone() }
    }
}

/// `h_n = g_n - sum_i g_{n_i} a_{n,i}` in the ring of `g`.
#[derive(Clone, Debug)]
pub struct WeakPlan {
    ring: LocalRing,
    g: Vec<RingElement>,
    basis_values: Vec<RingElement>,
    table: Vec<Vec<BigInt>>,
    bound: u64,
    policy: IndexPolicy,
}

impl WeakPlan {
    pub fn new(g: &[RingElement], orbit: &DualTable, bound: u64, policy: IndexPolicy) -> Result<Self> {
        let lr = g.first().ok_or_else(|| Error::Invalid("empty coefficient list".into()))?.ring().clone();
        if lr.ell() != orbit.ell {
            return Err(Error::ResidueCharacteristic(lr.ell(), orbit.ell));
        }
        let available = orbit.bound().min(g.len() as u64);
        if bound > available || bound == 0 {
            return Err(Error::BoundExceeded { requested: bound, available });
        }
        if let Some(&n) = orbit.basis_indices.iter().find(|&&n| n > g.len() as u64) {
            return Err(Error::BoundExceeded { requested: n, available: g.len() as u64 });
        }
        let precision = lr.precision().min(orbit.precision);
        let ring = lr.with_precision(precision)?;
        let g: Vec<RingElement> = g.iter().map(|x| x.reduce_to(&ring)).collect();
        let basis_values = orbit.basis_indices.iter().map(|&n| g[n as usize - 1].clone()).collect();
        let table = orbit.table[..bound as usize].to_vec();
        Ok(WeakPlan { ring, g, basis_values, table, bound, policy })
    }

    pub fn precision(&self) -> u32 {
        self.ring.precision()
    }

    /// The defect `h_n`.
    pub fn defect(&self, n: u64) -> RingElement {
        let row = &self.table[n as usize - 1];
        let mut h = self.g[n as usize - 1].clone();
        for (s, a) in self.basis_values.iter().zip(row) {
            h = h.sub(&s.scale(a));
        }
        h
    }

    pub fn item(&self, n: u64) -> Vec<Valuation> {
        vec![self.defect(n).valuation()]
    }

    pub fn run(&self) -> Result<Congruence> {
        let items: BTreeMap<u64, Vec<Valuation>> =
            self.policy.indices(self.bound).into_iter().map(|n| (n, self.item(n))).collect();
        assemble(Kind::Weak, self.bound, self.precision(), self.policy, &items)
    }
}

/// One DVR component of the tensor product of the two coefficient rings,
/// with the images of both coefficient lists.
#[derive(Clone, Debug)]
struct Common {
    left: Vec<RingElement>,
    right: Vec<RingElement>,
}

/// Strong comparison inside every component of `O_f (x) O_g`, i.e. over all
/// pairs of embeddings into a common extension up to Galois conjugacy.
#[derive(Clone, Debug)]
pub struct StrongPlan {
    common: Vec<Common>,
    precision: u32,
    bound: u64,
    policy: IndexPolicy,
}

impl StrongPlan {
    pub fn new(f: &PadicEigenform, g: &PadicEigenform, bound: u64, policy: IndexPolicy) -> Result<Self> {
        if f.ell != g.ell {
            return Err(Error::ResidueCharacteristic(f.ell, g.ell));
        }
        let available = f.bound().min(g.bound());
        if bound > available || bound == 0 {
            return Err(Error::BoundExceeded { requested: bound, available });
        }
        let precision = f.precision().min(g.precision());
        let fr = f.ring.with_precision(precision)?;
        let gr = g.ring.with_precision(precision)?;
        let fc: Vec<RingElement> = f.coefficients[..bound as usize].iter().map(|x| x.reduce_to(&fr)).collect();
        let gc: Vec<RingElement> = g.coefficients[..bound as usize].iter().map(|x| x.reduce_to(&gr)).collect();
        let common = if gr.degree() == 1 {
            vec![Common { right: gc.iter().map(|x| fr.from_int(&x.coords()[0])).collect(), left: fc }]
        } else if fr.degree() == 1 {
            vec![Common { left: fc.iter().map(|x| gr.from_int(&x.coords()[0])).collect(), right: gc }]
        } else {
            tensor_components(&fr, &gr, &fc, &gc)?
        };
        Ok(StrongPlan { common, precision, bound, policy })
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Number of common rings compared.
    pub fn width(&self) -> usize {
        self.common.len()
    }

    pub fn item(&self, n: u64) -> Vec<Valuation> {
        let k = n as usize - 1;
        self.common.iter().map(|c| c.left[k].sub(&c.right[k]).valuation()).collect()
    }

    pub fn run(&self) -> Result<Congruence> {
        let items: BTreeMap<u64, Vec<Valuation>> =
            self.policy.indices(self.bound).into_iter().map(|n| (n, self.item(n))).collect();
        assemble(Kind::Strong, self.bound, self.precision, self.policy, &items)
    }
}

/// Integer lift of the defining polynomial whose quotient over Z_l is the
/// valuation ring. Only at precision one can the stored polynomial fail,
/// and there any lift of `phi^e` is equivalent.
fn integral_lift(r: &LocalRing) -> Vec<BigInt> {
    if r.precision() == 1 && r.e() >= 2 {
        let zz = Integers;
        let mut g = poly::pow(&zz, r.residue_poly(), r.e() as u64);
        g[0] += BigInt::from(r.ell());
        g
    } else {
        r.defining_poly().to_vec()
    }
}

fn tensor_components(
    fr: &LocalRing,
    gr: &LocalRing,
    fc: &[RingElement],
    gc: &[RingElement],
) -> Result<Vec<Common>> {
    let zz = Integers;
    let (gf, gg) = (integral_lift(fr), integral_lift(gr));
    let (df, dg) = (fr.degree(), gr.degree());
    let n = df * dg;
    let reduce = |k: usize, m: &[BigInt], d: usize| {
        let mut r = poly::rem_monic(&zz, &poly::monomial(&zz, BigInt::one(), k), m);
        r.resize(d, BigInt::zero());
        r
    };
    let xs: Vec<Vec<BigInt>> = (0..2 * df - 1).map(|k| reduce(k, &gf, df)).collect();
    let ys: Vec<Vec<BigInt>> = (0..2 * dg - 1).map(|k| reduce(k, &gg, dg)).collect();
    let mut mult = vec![vec![Vec::new(); n]; n];
    for a in 0..n {
        for b in 0..n {
            let (rx, ry) = (&xs[a / dg + b / dg], &ys[a % dg + b % dg]);
            mult[a][b] = (0..n).map(|c| &rx[c / dg] * &ry[c % dg]).collect();
        }
    }
    let mut one = vec![BigInt::zero(); n];
    one[0] = BigInt::one();
    let tensor = Order::new(n, mult, one)?;
    let (order, t) = tensor.maximal_at(fr.ell())?;
    let tinv = field::inverse(&Rationals, &t).ok_or_else(|| Error::internal("singular basis change"))?;
    if !integer::is_integral(&tinv) {
        return Err(Error::internal("tensor order is not contained in its maximal order"));
    }
    let tinv = tinv.map(|x| x.to_integer());
    let to_order = |coords: Vec<BigInt>| crate::algebra::order::vec_mat(&zz, &coords, &tinv);
    let embed_left = |x: &RingElement| {
        let mut c = vec![BigInt::zero(); n];
        for (i, v) in x.coords().iter().enumerate() {
            c[i * dg] = v.clone();
        }
        to_order(c)
    };
    let embed_right = |x: &RingElement| {
        let mut c = vec![BigInt::zero(); n];
        c[..dg].clone_from_slice(x.coords());
        to_order(c)
    };
    let left: Vec<Vec<BigInt>> = fc.iter().map(embed_left).collect();
    let right: Vec<Vec<BigInt>> = gc.iter().map(embed_right).collect();
    let base = PrimePower::new(fr.ell(), fr.precision())?;
    let comps = order.components(&base)?;
    Ok(comps
        .iter()
        .map(|c| Common {
            left: left.iter().map(|x| c.image(&order, x)).collect(),
            right: right.iter().map(|x| c.image(&order, x)).collect(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::mat;
    use crate::hecke::{ell_adic_orbits, HeckeSpace, QlContext, DEFAULT_PRECISION_CAP};
    use std::collections::BTreeMap as Map;

    fn space(gens: Vec<Vec<Vec<i64>>>) -> HeckeSpace {
        let d = gens[0].len();
        let mut ms = vec![mat::identity(&Integers, d)];
        ms.extend(gens.iter().map(|g| mat::from_i64(&Integers, g)));
        HeckeSpace::new(1, 2, d, ms, None, Map::new()).unwrap()
    }

    fn eigenform(ring: &LocalRing, coeffs: &[Vec<i64>]) -> PadicEigenform {
        let coefficients = coeffs
            .iter()
            .map(|c| ring.element(&c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()))
            .collect();
        PadicEigenform { ell: ring.ell(), ring: ring.clone(), coefficients, rank: ring.degree(), attained: ring.precision() }
    }

    #[test]
    fn constructed_pair_weak_and_strong() {
        // (x - 1)(x - 126) at 5^6.
        let s = space(vec![vec![vec![1, 0], vec![0, 126]], vec![vec![3, 0], vec![0, 3 + 2 * 125]]]);
        let o = &ell_adic_orbits(&s, 5, 6).unwrap()[0];
        let ctx = QlContext::new(&s, 5).unwrap();
        let fs = ctx.orbits(o, DEFAULT_PRECISION_CAP).unwrap().eigenforms;
        for f in &fs {
            let c = congruence_exponent_weak_for(f, o);
            assert_eq!(c.exponent, Valuation::at_least(6, 1));
        }
        let c = StrongPlan::new(&fs[0], &fs[1], 3, IndexPolicy::All).unwrap().run().unwrap();
        assert_eq!(c.exponent, Valuation::exact(3, 1));
        let c = StrongPlan::new(&fs[0], &fs[0], 3, IndexPolicy::All).unwrap().run().unwrap();
        assert_eq!(c.exponent, Valuation::at_least(6, 1));
    }

    fn congruence_exponent_weak_for(f: &PadicEigenform, o: &EllAdicOrbit) -> Congruence {
        WeakPlan::new(&f.coefficients, &o.into(), o.bound(), IndexPolicy::All).unwrap().run().unwrap()
    }

    #[test]
    fn weak_defect_at_a_non_basis_index() {
        // Rank-2 orbit with basis indices 1, 2; perturb g_3 by 5^t.
        let s = space(vec![vec![vec![1, 0], vec![0, 126]], vec![vec![3, 0], vec![0, 3 + 2 * 125]]]);
        let o = &ell_adic_orbits(&s, 5, 6).unwrap()[0];
        assert_eq!(o.basis_indices, vec![1, 2]);
        let ctx = QlContext::new(&s, 5).unwrap();
        let f = &ctx.orbits(o, DEFAULT_PRECISION_CAP).unwrap().eigenforms[0];
        for t in 0..6u32 {
            let mut g = f.coefficients.clone();
            g[2] = g[2].add(&f.ring.from_int(&BigInt::from(5u32).pow(t)));
            let c = WeakPlan::new(&g, &o.into(), 3, IndexPolicy::All).unwrap().run().unwrap();
            assert_eq!(c.exponent, Valuation::exact(t as u64, 1));
            assert_eq!(c.breakdown[&1], Valuation::at_least(6, 1));
        }
    }

    #[test]
    fn ramified_perturbation_is_measured_in_lambda_units() {
        let z = LocalRing::base_ring(5, 4).unwrap();
        let r = LocalRing::new(5, 4, &[BigInt::from(-5), BigInt::zero(), BigInt::one()], 2).unwrap();
        let f = eigenform(&z, &[vec![1], vec![3], vec![7]]);
        // g = image of f, perturbed by pi^5 = 25 pi at n = 3.
        let g = eigenform(&r, &[vec![1, 0], vec![3, 0], vec![7, 25]]);
        let c = StrongPlan::new(&f, &g, 3, IndexPolicy::All).unwrap().run().unwrap();
        assert_eq!(c.exponent, Valuation::exact(5, 2));
        assert_eq!(c.exponent_normalised(), num_rational::Ratio::new(5, 2));
        let c2 = StrongPlan::new(&g, &f, 3, IndexPolicy::All).unwrap().run().unwrap();
        assert_eq!(c2.exponent, c.exponent);
    }

    #[test]
    fn conjugate_embeddings_are_maximised_over() {
        // g is the Galois conjugate of f in Z_3[i].
        let r = LocalRing::new(3, 4, &[BigInt::one(), BigInt::zero(), BigInt::one()], 1).unwrap();
        let f = eigenform(&r, &[vec![1, 0], vec![0, 1], vec![2, 1]]);
        let g = eigenform(&r, &[vec![1, 0], vec![0, -1], vec![2, -1]]);
        let c = StrongPlan::new(&f, &g, 3, IndexPolicy::All).unwrap().run().unwrap();
        assert_eq!(c.exponent, Valuation::at_least(4, 1));
        let plan = StrongPlan::new(&f, &g, 3, IndexPolicy::All).unwrap();
        assert_eq!(plan.width(), 2);
    }
}
