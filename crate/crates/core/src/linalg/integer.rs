//! Integer lattices: Hermite normal form and integer kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::mat::Mat;

/// Row-style Hermite normal form: nonzero rows only, positive pivots with
/// strictly increasing pivot columns, entries above a pivot reduced into
/// `[0, pivot)`.
pub fn hnf(a: &Mat<BigInt>) -> Mat<BigInt> {
    let cols = a.cols();
    let mut rows: Vec<Vec<BigInt>> = a.to_rows();
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    let mut pivot_cols: Vec<usize> = Vec::new();
    for c in 0..cols {
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
        let idx: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][c].is_zero()).collect();
        if idx.is_empty() {
            continue;
        }
        // Fold all rows with nonzero entry in column c into one via gcd steps.
        let p = idx[0];
        for &i in &idx[1..] {
            let a0 = rows[p][c].clone();
            let b0 = rows[i][c].clone();
            let eg = a0.extended_gcd(&b0);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let (ua, ub) = (&a0 / &g, &b0 / &g);
            let rp = rows[p].clone();
            let ri = rows[i].clone();
            rows[p] = rp.iter().zip(&ri).map(|(x, y)| &s * x + &t * y).collect();
            rows[i] = rp.iter().zip(&ri).map(|(x, y)| &ua * y - &ub * x).collect();
        }
        let mut prow = rows.swap_remove(p);
        if prow[c].is_negative() {
            for x in prow.iter_mut() {
                *x = -x.clone();
            }
        }
        out.push(prow);
        pivot_cols.push(c);
    }
    for k in 0..out.len() {
        let c = pivot_cols[k];
        let pv = out[k][c].clone();
        let prow = out[k].clone();
        for row in out.iter_mut().take(k) {
            let q = row[c].div_floor(&pv);
            if q.is_zero() {
                continue;
            }
            for j in 0..cols {
                row[j] = &row[j] - &q * &prow[j];
            }
        }
    }
    if out.is_empty() {
        return Mat::from_vec(0, cols, Vec::new());
    }
    Mat::from_rows(out)
}

/// Integer coordinates of `v` in the row lattice of a Hermite normal form,
/// or `None` if `v` is not in the lattice.
pub fn coordinates(h: &Mat<BigInt>, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rest = v.to_vec();
    let mut out = Vec::with_capacity(h.rows());
    for k in 0..h.rows() {
        let row = h.row(k);
        let p = row.iter().position(|x| !x.is_zero())?;
        let (q, r) = rest[p].div_rem(&row[p]);
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for (x, y) in rest.iter_mut().zip(row) {
                *x -= &q * y;
            }
        }
        out.push(q);
    }
    rest.iter().all(|x| x.is_zero()).then_some(out)
}

/// Basis of the integer right kernel `{x in Z^n : A x = 0}`.
pub fn kernel(a: &Mat<BigInt>) -> Vec<Vec<BigInt>> {
    // HNF of [A^T | I]: rows whose A^T part vanishes span the kernel.
    let n = a.cols();
    let m = a.rows();
    let aug = Mat::from_fn(n, m + n, |i, j| {
        if j < m {
            a.get(j, i).clone()
        } else if j - m == i {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    });
    let h = hnf(&aug);
    (0..h.rows())
        .filter(|&i| h.row(i)[..m].iter().all(|x| x.is_zero()))
        .map(|i| h.row(i)[m..].to_vec())
        .collect()
}

/// Scale a rational vector to a primitive integer vector (same direction).
pub fn primitive(v: &[BigRational]) -> Vec<BigInt> {
    let mut den = BigInt::one();
    for x in v {
        den = den.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn to_rational(m: &Mat<BigInt>) -> Mat<BigRational> {
    m.map(|x| BigRational::from_integer(x.clone()))
}

/// Common denominator of a rational matrix.
pub fn denominator(m: &Mat<BigRational>) -> BigInt {
    m.data().iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn is_integral(m: &Mat<BigRational>) -> bool {
    m.data().iter().all(|x| x.is_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ring::Integers;
    use crate::linalg::mat;

    #[test]
    fn hnf_of_small_lattice() {
        let a = mat::from_i64(&Integers, &[vec![2, 4], vec![3, 5]]);
        let h = hnf(&a);
        assert_eq!(h, mat::from_i64(&Integers, &[vec![1, 1], vec![0, 2]]));
    }

    #[test]
    fn integer_kernel() {
        let a = mat::from_i64(&Integers, &[vec![2, 4, 6]]);
        let k = kernel(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat::mul_vec(&Integers, &a, v).iter().all(|x| x.is_zero()));
        }
    }
}
