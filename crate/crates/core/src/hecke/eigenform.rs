//! Q_l-orbits of eigenforms inside one l-adic orbit.
//!
//! The reduced Hecke algebra is enlarged to its l-maximal order, whose
//! components over Z_l are DVRs. Each component inside the local factor is
//! one Galois orbit of l-adic eigenforms, and the image of T_n in it is the
//! eigenvalue b_n. Only the rank of a component needs precision beyond the
//! requested one: it is read off a trace, which is escalated until the trace
//! is determined or the cap is hit.

use std::cmp::Ordering;

use num_bigint::BigInt;

use super::ell_adic::{fingerprint_cmp, EllAdicOrbit};
use super::space::HeckeSpace;
use crate::algebra::{DvrComponent, MatrixOrder};
use crate::arith::local_ring::{LocalRing, RingElement};
use crate::arith::ring::PrimePower;
use crate::error::{Error, Result};
use crate::factor::finite_field;
use crate::linalg::mat::{self, Mat};

/// Default cap on the working precision used to separate components.
pub const DEFAULT_PRECISION_CAP: u32 = 64;

/// One Galois orbit of l-adic eigenforms: the ring its eigenvalues
/// generate, at the requested precision, and b_1..b_B.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicEigenform {
    pub ell: u64,
    pub ring: LocalRing,
    pub coefficients: Vec<RingElement>,
    /// Dimension of the eigenspace times the degree of the field.
    pub rank: usize,
    /// Working precision at which the component was separated.
    pub attained: u32,
}

impl PadicEigenform {
    pub fn precision(&self) -> u32 {
        self.ring.precision()
    }

    pub fn bound(&self) -> u64 {
        self.coefficients.len() as u64
    }

    /// `b_n`, 1-based.
    pub fn coefficient(&self, n: u64) -> Option<&RingElement> {
        n.checked_sub(1).and_then(|k| self.coefficients.get(k as usize))
    }

    /// Per n, the minimal polynomial over F_l of `b_n mod lambda`.
    pub fn fingerprint(&self) -> Vec<Vec<BigInt>> {
        let f = self.ring.base().residue_field();
        self.coefficients
            .iter()
            .map(|b| finite_field::radical(&f, &mat::charpoly(&f, &mat::reduce(&f, &self.ring.mult_matrix(b)))))
            .collect()
    }

    /// Characteristic polynomial over Z/l^N of `b_n` acting on the
    /// eigenform's share of the factor (the rank-dimensional block).
    pub fn charpoly(&self, n: u64) -> Option<Vec<BigInt>> {
        let b = self.coefficient(n)?;
        let base = self.ring.base();
        let cp = mat::charpoly(base, &self.ring.mult_matrix(b));
        let reps = self.rank / self.ring.degree();
        Some(crate::arith::poly::pow(base, &cp, reps as u64))
    }
}

/// Components whose rank the working precision could not pin down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnresolvedBlock {
    pub rank: usize,
    pub attained: u32,
    pub members: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QlOrbits {
    pub eigenforms: Vec<PadicEigenform>,
    pub unresolved: Option<UnresolvedBlock>,
}

/// The l-maximal order of a space's Hecke algebra with the coordinates of
/// every T_n, shared by all l-adic orbits of the space.
#[derive(Clone, Debug)]
pub struct QlContext {
    ell: u64,
    order: MatrixOrder,
    regular: Vec<Mat<BigInt>>,
    coords: Vec<Vec<BigInt>>,
    dim: usize,
}

impl QlContext {
    pub fn new(space: &HeckeSpace, ell: u64) -> Result<Self> {
        let alg = space.regular_algebra()?;
        let order = MatrixOrder::new(&alg)?.maximal_at(ell)?;
        let mut labelled: Vec<&(u64, Mat<BigInt>)> = alg.generators().iter().collect();
        labelled.sort_by_key(|(l, _)| *l);
        let regular: Vec<Mat<BigInt>> = labelled.iter().map(|(_, m)| m.clone()).collect();
        let coords = regular.iter().map(|m| order.coords(m)).collect::<Result<_>>()?;
        Ok(QlContext { ell, order, regular, coords, dim: alg.dim() })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    /// Q_l-orbits inside `orbit`, escalating the working precision up to
    /// `cap` when component ranks are not yet determined.
    pub fn orbits(&self, orbit: &EllAdicOrbit, cap: u32) -> Result<QlOrbits> {
        if orbit.ell != self.ell {
            return Err(Error::Invalid(format!("orbit is at {} but the context at {}", orbit.ell, self.ell)));
        }
        if orbit.bound() as usize != self.coords.len() {
            return Err(Error::Invalid("orbit and space have different bounds".into()));
        }
        let n = orbit.precision;
        let k = self.order.trace_exponent(self.ell)?;
        let f = orbit.ring().residue_field();
        let marker = self.order.coords_mod_ell(&f, &mat::reduce(&f, &orbit.factor.idempotent))?;
        let ord = &self.order.order;
        let mut m = n.max(1);
        loop {
            let ring = PrimePower::new(self.ell, m)?;
            let comps: Vec<DvrComponent> =
                ord.components(&ring)?.into_iter().filter(|c| c.is_one_mod_ell(ord, &marker)).collect();
            if comps.is_empty() {
                return Err(Error::internal("no component of the maximal order lies over the orbit"));
            }
            let ranks: Option<Vec<usize>> = if comps.len() == 1 {
                Some(vec![orbit.rank()])
            } else {
                comps.iter().map(|c| self.order.idempotent_rank(&ring, &c.idempotent)).collect::<Result<_>>()?
            };
            let enough = ranks.is_some();
            if enough || m >= cap {
                return self.finish(orbit, comps, ranks, m);
            }
            // Doubling until the trace is determined modulo something larger than the dimension.
            let mut next = m.saturating_mul(2);
            while next <= k || BigInt::from(self.ell).pow(next - k) <= BigInt::from(self.dim) {
                next = next.saturating_mul(2);
            }
            m = next.min(cap);
        }
    }

    fn finish(
        &self,
        orbit: &EllAdicOrbit,
        comps: Vec<DvrComponent>,
        ranks: Option<Vec<usize>>,
        attained: u32,
    ) -> Result<QlOrbits> {
        let Some(ranks) = ranks else {
            log::warn!("precision cap {attained} reached with {} unseparated components", comps.len());
            return Ok(QlOrbits {
                eigenforms: Vec::new(),
                unresolved: Some(UnresolvedBlock { rank: orbit.rank(), attained, members: comps.len() }),
            });
        };
        if ranks.iter().sum::<usize>() != orbit.rank() {
            return Err(Error::internal("eigenform ranks do not sum to the orbit rank"));
        }
        let mut eigenforms = Vec::with_capacity(comps.len());
        for (c, rank) in comps.iter().zip(ranks) {
            let ring = c.ring.with_precision(orbit.precision)?;
            let coefficients: Vec<RingElement> =
                self.coords.iter().map(|x| c.image(&self.order.order, x).reduce_to(&ring)).collect();
            if coefficients.first().map(|b| b.as_base() != Some(BigInt::from(1))).unwrap_or(true) {
                return Err(Error::internal("T_1 does not map to 1"));
            }
            eigenforms.push(PadicEigenform { ell: self.ell, ring, coefficients, rank, attained });
        }
        eigenforms.sort_by(eigenform_cmp);
        Ok(QlOrbits { eigenforms, unresolved: None })
    }

    /// Regular representation matrices of T_1..T_B.
    pub fn regular_matrices(&self) -> &[Mat<BigInt>] {
        &self.regular
    }
}

/// Degree, then defining polynomial, then fingerprint, then coefficients.
fn eigenform_cmp(a: &PadicEigenform, b: &PadicEigenform) -> Ordering {
    a.ring
        .degree()
        .cmp(&b.ring.degree())
        .then_with(|| a.ring.defining_poly().cmp(b.ring.defining_poly()))
        .then_with(|| fingerprint_cmp(&a.fingerprint(), &b.fingerprint()))
        .then_with(|| {
            let ca: Vec<&[BigInt]> = a.coefficients.iter().map(|x| x.coords()).collect();
            let cb: Vec<&[BigInt]> = b.coefficients.iter().map(|x| x.coords()).collect();
            ca.cmp(&cb)
        })
}

/// Q_l-orbits of one l-adic orbit of `space`.
pub fn qell_orbits(space: &HeckeSpace, orbit: &EllAdicOrbit, cap: u32) -> Result<QlOrbits> {
    QlContext::new(space, orbit.ell)?.orbits(orbit, cap)
}

/// `b_1..b_up_to`.
pub fn eigenform_coefficients(f: &PadicEigenform, up_to: u64) -> Result<Vec<RingElement>> {
    if up_to > f.bound() {
        return Err(Error::BoundExceeded { requested: up_to, available: f.bound() });
    }
    Ok(f.coefficients[..up_to as usize].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ring::Integers;
    use crate::hecke::ell_adic::ell_adic_orbits;
    use std::collections::BTreeMap;

    fn space(gens: Vec<Vec<Vec<i64>>>) -> HeckeSpace {
        let d = gens[0].len();
        let mut ms = vec![mat::identity(&Integers, d)];
        ms.extend(gens.iter().map(|g| mat::from_i64(&Integers, g)));
        HeckeSpace::new(1, 2, d, ms, None, BTreeMap::new()).unwrap()
    }

    fn all(s: &HeckeSpace, ell: u64, n: u32) -> Vec<QlOrbits> {
        let ctx = QlContext::new(s, ell).unwrap();
        ell_adic_orbits(s, ell, n).unwrap().iter().map(|o| ctx.orbits(o, DEFAULT_PRECISION_CAP).unwrap()).collect()
    }

    #[test]
    fn rank_one_orbit() {
        let s = space(vec![vec![vec![-2]], vec![vec![-1]]]);
        let o = ell_adic_orbits(&s, 5, 4).unwrap();
        let q = qell_orbits(&s, &o[0], DEFAULT_PRECISION_CAP).unwrap();
        assert_eq!(q.eigenforms.len(), 1);
        let f = &q.eigenforms[0];
        assert_eq!(f.rank, 1);
        for nn in 1..=3u64 {
            assert_eq!(f.coefficient(nn).unwrap().as_base().as_ref(), o[0].coefficient(nn, 0));
        }
        assert!(matches!(eigenform_coefficients(f, 4), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn constructed_congruence_separates_at_valuation_three() {
        // T_2 = diag(1, 126): one orbit at 5, two eigenforms.
        let s = space(vec![vec![vec![1, 0], vec![0, 126]]]);
        let qs = all(&s, 5, 6);
        assert_eq!(qs.len(), 1);
        let fs = &qs[0].eigenforms;
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().all(|f| f.rank == 1));
        let d = fs[0].coefficient(2).unwrap().sub(&fs[1].coefficient(2).unwrap().reduce_to(&fs[0].ring));
        assert_eq!(d.valuation(), crate::arith::local_ring::Valuation::exact(3, 1));
        assert_eq!(fs[0].fingerprint(), fs[1].fingerprint());
    }

    #[test]
    fn residually_split_quadratic_gives_two_orbits() {
        // x^2 - 6 = (x - 1)(x + 1) mod 5.
        let s = space(vec![vec![vec![0, 6], vec![1, 0]]]);
        let qs = all(&s, 5, 6);
        assert_eq!(qs.len(), 2);
        let r = PrimePower::new(5, 6).unwrap();
        for q in &qs {
            assert_eq!(q.eigenforms.len(), 1);
            let b = q.eigenforms[0].coefficient(2).unwrap().as_base().unwrap();
            assert_eq!(crate::arith::ring::Ring::sub(&r, &(&b * &b), &BigInt::from(6)), BigInt::from(0));
        }
    }

    #[test]
    fn ramified_quadratic_is_one_eigenform_of_rank_two() {
        let s = space(vec![vec![vec![0, 5], vec![1, 0]]]);
        let qs = all(&s, 5, 4);
        assert_eq!(qs.len(), 1);
        let f = &qs[0].eigenforms[0];
        assert_eq!((f.rank, f.ring.e(), f.ring.f()), (2, 2, 1));
        let b2 = f.coefficient(2).unwrap();
        assert!(b2.mul(b2).sub(&f.ring.from_i64(5)).is_zero());
    }

    #[test]
    fn scalar_blocks_need_the_trace() {
        // (x - 1)(x - 126)(x - 251): three rank-one eigenforms in one orbit.
        let s = space(vec![
            vec![vec![1, 0, 0], vec![0, 126, 0], vec![0, 0, 251]],
            vec![vec![1, 0, 0], vec![0, 126 * 126, 0], vec![0, 0, 251 * 251]],
        ]);
        let qs = all(&s, 5, 2);
        assert_eq!(qs.len(), 1);
        assert_eq!(qs[0].eigenforms.iter().map(|f| f.rank).collect::<Vec<_>>(), vec![1, 1, 1]);
        assert!(qs[0].eigenforms.iter().all(|f| f.attained >= 2));
    }
}
