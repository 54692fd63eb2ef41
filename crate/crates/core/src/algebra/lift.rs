//! Hensel lifting of idempotents through `e -> 3e^2 - 2e^3`.

use num_bigint::BigInt;
use num_traits::Zero;

use super::commuting::{CommutingMatrixAlgebra, Coefficients};
use crate::arith::ring::{PrimeField, PrimePower, Ring};
use crate::error::{Error, Result};
use crate::linalg::field::Echelon;
use crate::linalg::mat::{self, Mat};

/// A lifted idempotent and the l-adic valuation of the defect `e_n^2 - e_n`
/// after each iteration (index 0 is the starting lift).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedIdempotent {
    pub matrix: Mat<BigInt>,
    pub defects: Vec<u32>,
}

/// Monomials in the generators whose reductions form an F_l-basis of the
/// algebra mod l, kept together with their values mod l^N. By Nakayama they
/// also span the algebra over Z/l^N.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    ring: PrimePower,
    residue: Echelon<PrimeField>,
    lifted: Vec<Mat<BigInt>>,
}

impl MonomialBasis {
    pub fn new(alg: &CommutingMatrixAlgebra, ring: &PrimePower) -> Self {
        let f = ring.residue_field();
        let d = alg.dim();
        let gens: Vec<Mat<BigInt>> = alg.generators().iter().map(|(_, m)| mat::reduce(ring, m)).collect();
        let mut residue = Echelon::new(&f);
        let mut lifted = Vec::new();
        let mut queue = vec![mat::identity(ring, d)];
        while let Some(m) = queue.pop() {
            let red: Vec<BigInt> = m.data().iter().map(|x| f.reduce(x)).collect();
            if residue.insert(&red) {
                for g in &gens {
                    queue.push(mat::mul(ring, &m, g));
                }
                lifted.push(m);
            }
        }
        MonomialBasis { ring: ring.clone(), residue, lifted }
    }

    pub fn dim(&self) -> usize {
        self.lifted.len()
    }

    /// An element of the algebra mod l^N reducing to `x0` (given mod l).
    pub fn lift(&self, x0: &Mat<BigInt>) -> Result<Mat<BigInt>> {
        let f = self.ring.residue_field();
        let target: Vec<BigInt> = x0.data().iter().map(|x| f.reduce(x)).collect();
        let coeffs = self.residue.express(&target).ok_or(Error::NotInAlgebra)?;
        let d = x0.rows();
        let mut acc = mat::zeros(&self.ring, d, d);
        for (c, m) in coeffs.iter().zip(&self.lifted) {
            if !c.is_zero() {
                acc = mat::add(&self.ring, &acc, &mat::scale(&self.ring, m, c));
            }
        }
        Ok(acc)
    }
}

/// Minimal l-adic valuation of the entries (the precision if all vanish).
pub fn matrix_valuation(r: &PrimePower, m: &Mat<BigInt>) -> u32 {
    m.data().iter().map(|x| r.valuation(x)).min().unwrap_or(r.precision())
}

/// Lift an idempotent mod l of the algebra to one mod l^N.
pub fn lift_idempotent(e0: &Mat<BigInt>, alg: &CommutingMatrixAlgebra) -> Result<LiftedIdempotent> {
    let ring = match alg.coefficients() {
        Coefficients::Modular(r) => r.clone(),
        Coefficients::Integers => {
            return Err(Error::Invalid("idempotent lifting needs a Z/l^N coefficient ring".into()))
        }
    };
    let basis = MonomialBasis::new(alg, &ring);
    lift_with_basis(e0, &basis)
}

pub fn lift_with_basis(e0: &Mat<BigInt>, basis: &MonomialBasis) -> Result<LiftedIdempotent> {
    let ring = &basis.ring;
    let f = PrimeField::new(ring.ell())?;
    let e0r = mat::reduce(&f, e0);
    if !mat::eq(&f, &mat::mul(&f, &e0r, &e0r), &e0r) {
        return Err(Error::NotIdempotent(ring.ell()));
    }
    let mut e = basis.lift(&e0r)?;
    let defect = |e: &Mat<BigInt>| matrix_valuation(ring, &mat::sub(ring, &mat::mul(ring, e, e), e));
    let mut defects = vec![defect(&e)];
    let n = ring.precision();
    let max_iter = crate::arith::hensel::ceil_log2(n as u64) + 1;
    let three = ring.from_i64(3);
    let two = ring.from_i64(2);
    while *defects.last().unwrap() < n {
        if defects.len() as u32 > max_iter {
            return Err(Error::internal(format!("idempotent lifting did not converge: defects {defects:?}")));
        }
        let e2 = mat::mul(ring, &e, &e);
        let e3 = mat::mul(ring, &e2, &e);
        e = mat::sub(ring, &mat::scale(ring, &e2, &three), &mat::scale(ring, &e3, &two));
        defects.push(defect(&e));
    }
    Ok(LiftedIdempotent { matrix: e, defects })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn companion_algebra(r: &PrimePower, c0: i64) -> CommutingMatrixAlgebra {
        // Companion matrix of x^2 - c0.
        let m = mat::from_i64(r, &[vec![0, c0], vec![1, 0]]);
        CommutingMatrixAlgebra::new(Coefficients::Modular(r.clone()), 2, vec![(2, m)]).unwrap()
    }

    #[test]
    fn trivial_idempotents_are_fixed() {
        let r = PrimePower::new(5, 3).unwrap();
        let a = companion_algebra(&r, 6);
        let z = mat::zeros(&r, 2, 2);
        let one = mat::identity(&r, 2);
        assert_eq!(lift_idempotent(&z, &a).unwrap().matrix, z);
        assert_eq!(lift_idempotent(&one, &a).unwrap().matrix, one);
    }

    #[test]
    fn companion_of_x2_minus_6_matches_brute_force() {
        let r = PrimePower::new(5, 3).unwrap();
        let a = companion_algebra(&r, 6);
        let s = crate::algebra::decompose::decompose_mod_ell(&a, 5).unwrap();
        let lifted: Vec<Mat<BigInt>> = s.idempotents.iter().map(|e| lift_idempotent(e, &a).unwrap().matrix).collect();
        // Oracle: all u + v x in Z/125[x]/(x^2 - 6) with (u + v x)^2 = u + v x.
        let mut brute = Vec::new();
        for u in 0..125i64 {
            for v in 0..125i64 {
                let sq_u = (u * u + 6 * v * v).rem_euclid(125);
                let sq_v = (2 * u * v).rem_euclid(125);
                if sq_u == u && sq_v == v && !(u == 0 && v == 0) && !(u == 1 && v == 0) {
                    brute.push((u, v));
                }
            }
        }
        assert_eq!(brute.len(), 2);
        let gen = a.generator(2).unwrap();
        for e in &lifted {
            // e = u I + v X with X the companion matrix: read off u, v from column 0.
            let (u, v) = (e.get(0, 0).clone(), e.get(1, 0).clone());
            let rebuilt = mat::add(&r, &mat::scale(&r, &mat::identity(&r, 2), &u), &mat::scale(&r, gen, &v));
            assert_eq!(&rebuilt, e);
            let uv = (i64::try_from(u).unwrap(), i64::try_from(v).unwrap());
            assert!(brute.contains(&uv));
        }
    }

    #[test]
    fn rejects_non_idempotent() {
        let r = PrimePower::new(5, 3).unwrap();
        let a = companion_algebra(&r, 6);
        let x = mat::from_i64(&r, &[vec![2, 0], vec![0, 2]]);
        assert!(matches!(lift_idempotent(&x, &a), Err(Error::NotIdempotent(5))));
    }
}
