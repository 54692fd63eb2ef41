//! Local decomposition of a commutative matrix algebra over F_l.

use num_bigint::BigInt;

use super::commuting::CommutingMatrixAlgebra;
use crate::arith::poly;
use crate::arith::ring::{PrimeField, PrimePower, Ring};
use crate::error::Result;
use crate::factor::finite_field;
use crate::linalg::field::{self, Echelon};
use crate::linalg::mat::{self, Mat};

/// A complete set of pairwise orthogonal idempotents, each a d x d matrix
/// over Z/l^N with `e^2 = e` at `modulus`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentSet {
    pub modulus: PrimePower,
    pub idempotents: Vec<Mat<BigInt>>,
}

impl IdempotentSet {
    /// Check idempotence, orthogonality and completeness exactly.
    pub fn verify(&self) -> bool {
        let r = &self.modulus;
        let d = match self.idempotents.first() {
            Some(e) => e.rows(),
            None => return false,
        };
        let mut sum = mat::zeros(r, d, d);
        for (i, e) in self.idempotents.iter().enumerate() {
            if !mat::eq(r, &mat::mul(r, e, e), e) {
                return false;
            }
            for f in &self.idempotents[i + 1..] {
                if !mat::is_zero(r, &mat::mul(r, e, f)) {
                    return false;
                }
            }
            sum = mat::add(r, &sum, e);
        }
        mat::eq(r, &sum, &mat::identity(r, d))
    }
}

/// Primitive idempotents of the algebra reduced mod l.
///
/// Each generator's minimal polynomial splits the space into coprime
/// generalised eigenspaces. That alone separates the maximal ideals only
/// when residue fields are prime fields, so every resulting piece is then
/// tested with Berlekamp's subalgebra `{x : x^l = x}`, whose dimension is
/// the number of local factors, and split further by one of its elements.
pub fn decompose_mod_ell(alg: &CommutingMatrixAlgebra, ell: u64) -> Result<IdempotentSet> {
    let f = PrimeField::new(ell)?;
    let gens = alg.residue_generators(&f);
    let pieces = local_pieces(&f, alg.dim(), &gens);
    Ok(IdempotentSet { modulus: f.as_prime_power().clone(), idempotents: projectors(&f, alg.dim(), &pieces) })
}

/// Invariant subspaces (as column bases) on which the algebra is local.
pub(crate) fn local_pieces(f: &PrimeField, d: usize, gens: &[Mat<BigInt>]) -> Vec<Mat<BigInt>> {
    let mut pieces = vec![mat::identity(f, d)];
    for g in gens {
        let mut next = Vec::new();
        for b in pieces {
            let a = restrict(f, g, &b);
            next.extend(split_by(f, &b, &a));
        }
        pieces = next;
    }
    let mut done = Vec::new();
    while let Some(b) = pieces.pop() {
        let restricted: Vec<Mat<BigInt>> = gens.iter().map(|g| restrict(f, g, &b)).collect();
        match berlekamp_splitter(f, &restricted, b.cols()) {
            None => done.push(b),
            Some(s) => pieces.extend(split_by(f, &b, &s)),
        }
    }
    done
}

/// Matrix of `g` on the invariant subspace with column basis `b`.
pub(crate) fn restrict(f: &PrimeField, g: &Mat<BigInt>, b: &Mat<BigInt>) -> Mat<BigInt> {
    let k = b.cols();
    let rows = field::independent_subset(f, &b.to_rows());
    debug_assert_eq!(rows.len(), k);
    let cols: Vec<usize> = (0..k).collect();
    let bs = b.submatrix(&rows, &cols);
    let inv = field::inverse(f, &bs).expect("independent rows");
    let gb = mat::mul(f, g, b);
    mat::mul(f, &inv, &gb.submatrix(&rows, &cols))
}

/// Split the subspace `b` into generalised eigenspaces of `a` (given in
/// `b`-coordinates), one per irreducible factor of its minimal polynomial.
fn split_by(f: &PrimeField, b: &Mat<BigInt>, a: &Mat<BigInt>) -> Vec<Mat<BigInt>> {
    let mp = mat::minpoly(f, a);
    let fac = finite_field::factor(f, &mp);
    if fac.len() <= 1 {
        return vec![b.clone()];
    }
    fac.iter()
        .map(|(phi, m)| {
            let p = poly::pow(f, phi, *m as u64);
            let ker = field::kernel(f, &mat::eval_poly(f, &p, a));
            mat::mul(f, b, &Mat::from_cols(&ker))
        })
        .collect()
}

/// Basis (as matrices) of the F_l-algebra spanned by monomials in `gens`.
pub(crate) fn algebra_span(f: &PrimeField, gens: &[Mat<BigInt>], k: usize) -> Vec<Mat<BigInt>> {
    let mut basis: Vec<Mat<BigInt>> = Vec::new();
    let mut ech = Echelon::new(f);
    let mut queue = vec![mat::identity(f, k)];
    while let Some(m) = queue.pop() {
        if ech.insert(m.data()) {
            for g in gens {
                queue.push(mat::mul(f, &m, g));
            }
            basis.push(m);
        }
    }
    basis
}

/// A non-scalar element of `{x : x^l = x}` if the algebra is not local.
fn berlekamp_splitter(f: &PrimeField, gens: &[Mat<BigInt>], k: usize) -> Option<Mat<BigInt>> {
    if k <= 1 {
        return None;
    }
    let basis = algebra_span(f, gens, k);
    let n = basis.len();
    if n <= 1 {
        return None;
    }
    let mut span = Echelon::new(f);
    for b in &basis {
        span.insert(b.data());
    }
    // Columns: coordinates of b_i^l - b_i in the span basis.
    let mut cols = Vec::with_capacity(n);
    for b in &basis {
        let frob = mat::pow(f, b, f.ell());
        let diff = mat::sub(f, &frob, b);
        let c = span.express(diff.data()).expect("algebra is closed under powers");
        cols.push(c);
    }
    let ker = field::kernel(f, &Mat::from_cols(&cols));
    if ker.len() <= 1 {
        return None;
    }
    for v in &ker {
        let mut x = mat::zeros(f, k, k);
        for (c, b) in v.iter().zip(&basis) {
            x = mat::add(f, &x, &mat::scale(f, b, c));
        }
        let is_scalar = (0..k).all(|i| (0..k).all(|j| if i == j { x.get(i, i) == x.get(0, 0) } else { f.is_zero(x.get(i, j)) }));
        if !is_scalar {
            return Some(x);
        }
    }
    None
}

/// Projectors onto each piece along the others, sorted by entries.
fn projectors(f: &PrimeField, d: usize, pieces: &[Mat<BigInt>]) -> Vec<Mat<BigInt>> {
    let cols: Vec<Vec<BigInt>> = pieces.iter().flat_map(|b| (0..b.cols()).map(|j| b.col(j))).collect();
    let p = Mat::from_cols(&cols);
    let pinv = field::inverse(f, &p).expect("pieces form a direct sum decomposition");
    let mut out = Vec::with_capacity(pieces.len());
    let mut start = 0;
    for b in pieces {
        let k = b.cols();
        let diag = Mat::from_fn(d, d, |i, j| if i == j && i >= start && i < start + k { f.one() } else { f.zero() });
        out.push(mat::mul(f, &mat::mul(f, &p, &diag), &pinv));
        start += k;
    }
    out.sort_by(|a, b| a.data().cmp(b.data()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::commuting::Coefficients;

    fn alg(ell: u64, gens: Vec<Vec<Vec<i64>>>) -> CommutingMatrixAlgebra {
        let r = PrimePower::new(ell, 1).unwrap();
        let d = gens[0].len();
        let gens = gens.into_iter().enumerate().map(|(i, g)| (i as u64 + 2, mat::from_i64(&r, &g))).collect();
        CommutingMatrixAlgebra::new(Coefficients::Modular(r), d, gens).unwrap()
    }

    #[test]
    fn companion_of_x2_minus_6_mod_5_splits() {
        let a = alg(5, vec![vec![vec![0, 6], vec![1, 0]]]);
        let s = decompose_mod_ell(&a, 5).unwrap();
        assert_eq!(s.idempotents.len(), 2);
        assert!(s.verify());
    }

    #[test]
    fn identity_and_nilpotent_are_local() {
        let a = alg(5, vec![vec![vec![1, 0], vec![0, 1]]]);
        assert_eq!(decompose_mod_ell(&a, 5).unwrap().idempotents.len(), 1);
        let a = alg(5, vec![vec![vec![0, 0], vec![1, 0]]]);
        assert_eq!(decompose_mod_ell(&a, 5).unwrap().idempotents.len(), 1);
    }

    #[test]
    fn berlekamp_separates_conjugate_pairs() {
        // x and y both act with minimal polynomial x^2 + 1 (irreducible mod 3)
        // on F_9 (x) F_9, which is F_9 x F_9: generator splitting sees one
        // piece, but there are two maximal ideals.
        let j = vec![vec![0, -1], vec![1, 0]];
        let kron = |a: &Vec<Vec<i64>>, b: &Vec<Vec<i64>>| {
            let mut out = vec![vec![0; 4]; 4];
            for i in 0..2 {
                for jj in 0..2 {
                    for k in 0..2 {
                        for l in 0..2 {
                            out[2 * i + k][2 * jj + l] = a[i][jj] * b[k][l];
                        }
                    }
                }
            }
            out
        };
        let id = vec![vec![1, 0], vec![0, 1]];
        let a = alg(3, vec![kron(&j, &id), kron(&id, &j)]);
        let s = decompose_mod_ell(&a, 3).unwrap();
        assert_eq!(s.idempotents.len(), 2);
        assert!(s.verify());
    }
}
