use num_bigint::BigInt;

use crate::arith::ring::{Integers, PrimeField, PrimePower};
use crate::error::{Error, Result};
use crate::linalg::mat::{self, Mat};

/// Coefficient ring of a matrix algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coefficients {
    Integers,
    Modular(PrimePower),
}

/// The algebra spanned by monomials in pairwise commuting square matrices.
/// The identity is always included; by convention a generator labelled 1 must
/// be the identity (the Hecke operator T_1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutingMatrixAlgebra {
    coefficients: Coefficients,
    dim: usize,
    generators: Vec<(u64, Mat<BigInt>)>,
}

impl CommutingMatrixAlgebra {
    pub fn new(coefficients: Coefficients, dim: usize, generators: Vec<(u64, Mat<BigInt>)>) -> Result<Self> {
        let mut gens: Vec<(u64, Mat<BigInt>)> = Vec::with_capacity(generators.len());
        for (label, m) in generators {
            if label == 0 {
                return Err(Error::Invalid("generator labels must be positive".into()));
            }
            if gens.iter().any(|(l, _)| *l == label) {
                return Err(Error::DuplicateLabel(label));
            }
            mat::check_square(&m, dim, &format!("generator {label}"))?;
            let m = match &coefficients {
                Coefficients::Integers => m,
                Coefficients::Modular(r) => mat::reduce(r, &m),
            };
            gens.push((label, m));
        }
        let alg = CommutingMatrixAlgebra { coefficients, dim, generators: gens };
        if let Some((_, t1)) = alg.generators.iter().find(|(l, _)| *l == 1) {
            if !alg.eq_mat(t1, &mat::identity(&Integers, dim)) {
                return Err(Error::Invalid("generator labelled 1 must be the identity".into()));
            }
        }
        for i in 0..alg.generators.len() {
            for j in i + 1..alg.generators.len() {
                let (li, a) = &alg.generators[i];
                let (lj, b) = &alg.generators[j];
                if !alg.commute(a, b) {
                    return Err(Error::NonCommuting(*li, *lj));
                }
            }
        }
        Ok(alg)
    }

    /// For generators known to commute by construction.
    pub(crate) fn new_unchecked(coefficients: Coefficients, dim: usize, generators: Vec<(u64, Mat<BigInt>)>) -> Self {
        CommutingMatrixAlgebra { coefficients, dim, generators }
    }

    fn eq_mat(&self, a: &Mat<BigInt>, b: &Mat<BigInt>) -> bool {
        match &self.coefficients {
            Coefficients::Integers => a == b,
            Coefficients::Modular(r) => mat::eq(r, a, &mat::reduce(r, b)),
        }
    }

    fn commute(&self, a: &Mat<BigInt>, b: &Mat<BigInt>) -> bool {
        match &self.coefficients {
            Coefficients::Integers => mat::commute(&Integers, a, b),
            Coefficients::Modular(r) => mat::commute(r, a, b),
        }
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coefficients
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[(u64, Mat<BigInt>)] {
        &self.generators
    }

    pub fn generator(&self, label: u64) -> Option<&Mat<BigInt>> {
        self.generators.iter().find(|(l, _)| *l == label).map(|(_, m)| m)
    }

    /// The same generators reduced into Z/l^N (skipping the commutation
    /// re-check, which reduction preserves).
    pub fn reduce(&self, ring: &PrimePower) -> CommutingMatrixAlgebra {
        CommutingMatrixAlgebra {
            coefficients: Coefficients::Modular(ring.clone()),
            dim: self.dim,
            generators: self.generators.iter().map(|(l, m)| (*l, mat::reduce(ring, m))).collect(),
        }
    }

    /// Generators as matrices over F_l.
    pub fn residue_generators(&self, f: &PrimeField) -> Vec<Mat<BigInt>> {
        self.generators.iter().map(|(_, m)| mat::reduce(f, m)).collect()
    }
}
