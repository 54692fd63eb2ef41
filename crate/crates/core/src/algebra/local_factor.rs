//! Local factors of a commutative matrix algebra over Z/l^N.

use num_bigint::BigInt;

use super::commuting::{CommutingMatrixAlgebra, Coefficients};
use super::decompose::{self, IdempotentSet};
use super::lift::{self, MonomialBasis};
use crate::arith::ring::{PrimeField, PrimePower};
use crate::error::{Error, Result};
use crate::linalg::mat::{self, Mat};
use crate::linalg::field::{self, Echelon};
use crate::linalg::modular;

/// One local factor `e A` of the algebra: its idempotent, a canonical basis
/// of the image `e V`, and every generator restricted to that image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFactor {
    pub ring: PrimePower,
    pub idempotent: Mat<BigInt>,
    /// Basis vectors of `e V` in Howell form: vector j has a 1 in coordinate
    /// `pivots[j]` and zeros at the other pivots.
    pub basis: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    /// Generators restricted to the image, labelled as in the algebra.
    pub projected: Vec<(u64, Mat<BigInt>)>,
    pub residue_degree: u32,
}

impl LocalFactor {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Matrix of a commuting operator `m` on `e V` in the stored basis.
    pub fn project(&self, m: &Mat<BigInt>) -> Mat<BigInt> {
        project(&self.ring, m, &self.basis, &self.pivots)
    }

    pub fn projected(&self, label: u64) -> Option<&Mat<BigInt>> {
        self.projected.iter().find(|(l, _)| *l == label).map(|(_, m)| m)
    }

    /// The projected generators as an algebra in their own right.
    pub fn algebra(&self) -> Result<CommutingMatrixAlgebra> {
        CommutingMatrixAlgebra::new(Coefficients::Modular(self.ring.clone()), self.rank(), self.projected.clone())
    }
}

fn project(r: &PrimePower, m: &Mat<BigInt>, basis: &[Vec<BigInt>], pivots: &[usize]) -> Mat<BigInt> {
    let k = basis.len();
    let mut out = mat::zeros(r, k, k);
    for (col, b) in basis.iter().enumerate() {
        let img = mat::mul_vec(r, m, b);
        for (row, &p) in pivots.iter().enumerate() {
            out.set(row, col, img[p].clone());
        }
    }
    out
}

/// Decompose over Z/l^N: primitive idempotents mod l, lifted, with images
/// and projected generators.
pub fn local_factors(alg: &CommutingMatrixAlgebra, ring: &PrimePower) -> Result<Vec<LocalFactor>> {
    let alg = match alg.coefficients() {
        Coefficients::Modular(r) if r == ring => alg.clone(),
        Coefficients::Modular(r) if r.ell() == ring.ell() && r.precision() >= ring.precision() => alg.reduce(ring),
        Coefficients::Modular(r) => {
            return Err(Error::Invalid(format!("algebra is over {r:?}, cannot decompose over {ring:?}")))
        }
        Coefficients::Integers => alg.reduce(ring),
    };
    let residue = decompose::decompose_mod_ell(&alg, ring.ell())?;
    let basis = MonomialBasis::new(&alg, ring);
    let mut lifted = Vec::with_capacity(residue.idempotents.len());
    for e0 in &residue.idempotents {
        lifted.push(lift::lift_with_basis(e0, &basis)?.matrix);
    }
    let set = IdempotentSet { modulus: ring.clone(), idempotents: lifted };
    if !set.verify() {
        return Err(Error::internal("lifted idempotents are not complete and orthogonal"));
    }
    let f = ring.residue_field();
    let mut out = Vec::with_capacity(set.idempotents.len());
    for e in set.idempotents {
        let (basis, pivots) = modular::free_image_basis(ring, &e)?;
        let projected: Vec<(u64, Mat<BigInt>)> =
            alg.generators().iter().map(|(l, m)| (*l, project(ring, m, &basis, &pivots))).collect();
        let res: Vec<Mat<BigInt>> = projected.iter().map(|(_, m)| mat::reduce(&f, m)).collect();
        if decompose::local_pieces(&f, basis.len(), &res).len() != 1 {
            return Err(Error::internal("lifted factor is not local modulo l"));
        }
        let residue_degree = residue_degree(&f, &res, basis.len());
        out.push(LocalFactor { ring: ring.clone(), idempotent: e, basis, pivots, projected, residue_degree });
    }
    Ok(out)
}

/// Degree over F_l of the residue field of a local algebra: its dimension
/// minus that of its radical, the kernel of `x -> x^(l^t)` for large t.
pub(crate) fn residue_degree(f: &PrimeField, gens: &[Mat<BigInt>], k: usize) -> u32 {
    let span = decompose::algebra_span(f, gens, k);
    let n = span.len();
    let mut q = f.ell();
    while (q as usize) < n {
        q = q.saturating_mul(f.ell());
    }
    let cols: Vec<Vec<BigInt>> = span.iter().map(|b| mat::pow(f, b, q).data().to_vec()).collect();
    field::rank(f, &Mat::from_cols(&cols)) as u32
}

/// Labels whose projections mod l form an F_l-basis of the factor mod l,
/// chosen greedily in increasing order with the identity (label 1) first.
pub fn basis_indices(factor: &LocalFactor) -> Result<Vec<u64>> {
    let f = factor.ring.residue_field();
    let r = factor.rank();
    let mut candidates: Vec<(u64, Mat<BigInt>)> = vec![(1, mat::identity(&f, r))];
    let mut rest: Vec<&(u64, Mat<BigInt>)> = factor.projected.iter().filter(|(l, _)| *l != 1).collect();
    rest.sort_by_key(|(l, _)| *l);
    candidates.extend(rest.into_iter().map(|(l, m)| (*l, mat::reduce(&f, m))));
    let vectors: Vec<Vec<BigInt>> = candidates.iter().map(|(_, m)| m.data().to_vec()).collect();
    let mut chosen = Vec::new();
    let mut ech = Echelon::new(&f);
    for (i, v) in vectors.iter().enumerate() {
        if chosen.len() == r {
            break;
        }
        if ech.insert(v) {
            chosen.push(candidates[i].0);
        }
    }
    if chosen.len() < r {
        return Err(Error::InsufficientLabels { found: chosen.len(), rank: r });
    }
    Ok(chosen)
}
