//! Local factors of T (x) Z_l with basis indices and echelonised dual bases.

use std::cmp::Ordering;

use num_bigint::BigInt;

use super::space::HeckeSpace;
use crate::algebra::{basis_indices, local_factors, LocalFactor};
use crate::arith::ring::PrimePower;
use crate::error::{Error, Result};
use crate::factor::finite_field;
use crate::linalg::mat::{self, Mat};
use crate::linalg::modular;

/// One maximal ideal of T (x) F_l with its local factor over Z/l^N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllAdicOrbit {
    pub ell: u64,
    pub precision: u32,
    pub factor: LocalFactor,
    pub basis_indices: Vec<u64>,
    /// Row n-1 holds `a_{n,1..r}`: `T_n = sum_i a_{n,i} T_{n_i}` on the factor.
    pub table: Vec<Vec<BigInt>>,
    /// Row n-1: the radical of the characteristic polynomial of T_n mod l,
    /// i.e. the minimal polynomial over F_l of its eigenvalue.
    pub fingerprint: Vec<Vec<BigInt>>,
}

impl EllAdicOrbit {
    pub fn rank(&self) -> usize {
        self.factor.rank()
    }

    pub fn bound(&self) -> u64 {
        self.table.len() as u64
    }

    pub fn ring(&self) -> &PrimePower {
        &self.factor.ring
    }

    /// `a_{n,i}` for 1-based `n` and 0-based `i`.
    pub fn coefficient(&self, n: u64, i: usize) -> Option<&BigInt> {
        n.checked_sub(1).and_then(|k| self.table.get(k as usize)).and_then(|row| row.get(i))
    }
}

/// Lexicographic order on fingerprints, each polynomial compared canonically.
pub fn fingerprint_cmp(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match finite_field::canonical_cmp(x, y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// Fingerprint of a local factor: per label, the radical of the residual
/// characteristic polynomial.
pub fn fingerprint(factor: &LocalFactor) -> Vec<Vec<BigInt>> {
    let f = factor.ring.residue_field();
    let mut labelled: Vec<&(u64, Mat<BigInt>)> = factor.projected.iter().collect();
    labelled.sort_by_key(|(l, _)| *l);
    labelled
        .iter()
        .map(|(_, m)| finite_field::radical(&f, &mat::charpoly(&f, &mat::reduce(&f, m))))
        .collect()
}

/// Solve `T_n = sum_i a_{n,i} T_{n_i}` in the factor for every stored n.
pub fn dual_basis(factor: &LocalFactor, indices: &[u64]) -> Result<Vec<Vec<BigInt>>> {
    let r = &factor.ring;
    let basis: Vec<Vec<BigInt>> = indices
        .iter()
        .map(|&n| {
            factor.projected(n).map(|m| m.data().to_vec()).ok_or_else(|| Error::internal(format!("label {n} missing")))
        })
        .collect::<Result<_>>()?;
    let a = Mat::from_cols(&basis);
    let mut labelled: Vec<&(u64, Mat<BigInt>)> = factor.projected.iter().collect();
    labelled.sort_by_key(|(l, _)| *l);
    labelled.iter().map(|(_, m)| modular::solve_full_column_rank(r, &a, m.data())).collect()
}

/// The l-adic orbits of the space at precision N, ordered by fingerprint
/// and rank (then by idempotent entries, which never tie for distinct
/// factors). Factors are taken in the regular representation, so a factor
/// of rank r is the localisation of the Hecke algebra itself and reduction
/// mod l is faithful on it.
pub fn ell_adic_orbits(space: &HeckeSpace, ell: u64, precision: u32) -> Result<Vec<EllAdicOrbit>> {
    let ring = PrimePower::new(ell, precision)?;
    let mut out = Vec::new();
    for factor in local_factors(&space.regular_algebra()?, &ring)? {
        let indices = basis_indices(&factor)?;
        let table = dual_basis(&factor, &indices)?;
        let fingerprint = fingerprint(&factor);
        out.push(EllAdicOrbit { ell, precision, factor, basis_indices: indices, table, fingerprint });
    }
    out.sort_by(|a, b| {
        fingerprint_cmp(&a.fingerprint, &b.fingerprint)
            .then(a.rank().cmp(&b.rank()))
            .then_with(|| a.factor.idempotent.data().cmp(b.factor.idempotent.data()))
    });
    Ok(out)
}
