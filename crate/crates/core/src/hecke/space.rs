use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::sturm::sturm_bound;
use crate::algebra::{Coefficients, CommutingMatrixAlgebra};
use crate::arith::ring::Integers;
use crate::error::{Error, Result};
use crate::linalg::mat::{self, Mat};

/// Integer Hecke matrices T_1..T_B on one basis of a space of cusp forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeSpace {
    pub level: u64,
    pub weight: u32,
    dim: usize,
    matrices: Vec<Mat<BigInt>>,
    pub provenance: Option<String>,
    pub meta: BTreeMap<String, String>,
}

impl HeckeSpace {
    /// `matrices[n - 1]` is T_n. T_1 must be the identity and all matrices
    /// must commute. A bound below the Sturm bound is only warned about.
    pub fn new(
        level: u64,
        weight: u32,
        dim: usize,
        matrices: Vec<Mat<BigInt>>,
        provenance: Option<String>,
        meta: BTreeMap<String, String>,
    ) -> Result<Self> {
        if level == 0 {
            return Err(Error::Invalid("level must be positive".into()));
        }
        if dim == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        if matrices.is_empty() {
            return Err(Error::Invalid("at least T_1 is required".into()));
        }
        if matrices[0] != mat::identity(&Integers, dim) {
            return Err(Error::Invalid("T_1 must be the identity".into()));
        }
        let gens = matrices.iter().enumerate().map(|(i, m)| (i as u64 + 1, m.clone())).collect();
        CommutingMatrixAlgebra::new(Coefficients::Integers, dim, gens)?;
        let space = HeckeSpace { level, weight, dim, matrices, provenance, meta };
        let sturm = sturm_bound(level, weight.max(2));
        if space.bound() < sturm {
            log::warn!("space {}.{}: bound {} is below the Sturm bound {}", level, weight, space.bound(), sturm);
        }
        Ok(space)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bound(&self) -> u64 {
        self.matrices.len() as u64
    }

    pub fn matrices(&self) -> &[Mat<BigInt>] {
        &self.matrices
    }

    pub fn matrix(&self, n: u64) -> Option<&Mat<BigInt>> {
        n.checked_sub(1).and_then(|i| self.matrices.get(i as usize))
    }

    /// The algebra generated by T_1..T_B, labelled by n.
    pub fn algebra(&self) -> CommutingMatrixAlgebra {
        let gens = self.matrices.iter().enumerate().map(|(i, m)| (i as u64 + 1, m.clone())).collect();
        CommutingMatrixAlgebra::new_unchecked(Coefficients::Integers, self.dim, gens)
    }

    /// The Hecke algebra acting on itself by multiplication, on a Z-basis
    /// of the ring generated by the T_n. Its rank is d exactly when the
    /// space has multiplicity one.
    pub fn regular_algebra(&self) -> Result<CommutingMatrixAlgebra> {
        crate::algebra::regular_algebra(&self.algebra())
    }

    /// The same space restricted to T_1..T_b.
    pub fn truncate(&self, b: u64) -> Result<HeckeSpace> {
        if b == 0 || b > self.bound() {
            return Err(Error::BoundExceeded { requested: b, available: self.bound() });
        }
        let mut s = self.clone();
        s.matrices.truncate(b as usize);
        Ok(s)
    }
}
