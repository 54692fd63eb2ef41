//! Linear algebra over Z/l^N: Howell normal form, Smith exponents, and
//! solving systems whose coefficient matrix has a unit minor.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::field;
use super::mat::{self, Mat};
use crate::arith::ring::{PrimePower, Ring};
use crate::error::{Error, Result};

/// Howell normal form of the row span of `a`.
///
/// Nonzero rows have strictly increasing pivot columns, each pivot is a power
/// of l, entries above a pivot `l^v` lie in `[0, l^v)`, and the span is
/// saturated (every element of the span with leading zeros up to column c is
/// a combination of the rows with pivot beyond c). Two matrices have the same
/// row span iff their Howell forms agree.
pub fn howell_form(r: &PrimePower, a: &Mat<BigInt>) -> Mat<BigInt> {
    let cols = a.cols();
    let mut pending: Vec<Vec<BigInt>> =
        a.to_rows().into_iter().map(|row| row.iter().map(|x| r.reduce(x)).collect()).collect();
    let mut out: Vec<(usize, u32, Vec<BigInt>)> = Vec::new();
    for c in 0..cols {
        pending.retain(|row| row.iter().any(|x| !x.is_zero()));
        // Pick a row of minimal valuation in column c.
        let best = pending
            .iter()
            .enumerate()
            .filter(|(_, row)| !row[c].is_zero())
            .min_by_key(|(i, row)| (r.valuation(&row[c]), *i))
            .map(|(i, _)| i);
        let Some(bi) = best else { continue };
        let mut prow = pending.swap_remove(bi);
        let v = r.valuation(&prow[c]);
        let unit = &prow[c] / r.ell_pow(v);
        let uinv = r.inv(&unit).expect("unit part is invertible");
        for x in prow.iter_mut() {
            *x = r.mul(x, &uinv);
        }
        let lv = r.ell_pow(v);
        for row in pending.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let q = &row[c] / &lv;
            for j in 0..cols {
                row[j] = r.sub(&row[j], &r.mul(&q, &prow[j]));
            }
        }
        // Saturation row: l^{N-v} * pivot row kills column c.
        if v > 0 {
            let s = r.ell_pow(r.precision() - v);
            let extra: Vec<BigInt> = prow.iter().map(|x| r.mul(x, &s)).collect();
            if extra.iter().any(|x| !x.is_zero()) {
                pending.push(extra);
            }
        }
        out.push((c, v, prow));
    }
    // Reduce entries above pivots; row k is zero left of its pivot, so
    // processing pivots left to right never disturbs an earlier reduction.
    for k in 0..out.len() {
        let (c, v, prow) = out[k].clone();
        let lv = r.ell_pow(v);
        for (_, _, row) in out.iter_mut().take(k) {
            let q = row[c].div_floor(&lv);
            if q.is_zero() {
                continue;
            }
            for j in 0..cols {
                row[j] = r.sub(&row[j], &r.mul(&q, &prow[j]));
            }
        }
    }
    let rows: Vec<Vec<BigInt>> = out.into_iter().map(|(_, _, row)| row).collect();
    if rows.is_empty() {
        return Mat::from_vec(0, cols, Vec::new());
    }
    Mat::from_rows(rows)
}

/// Canonical basis of the column span of `a` when that span is a free direct
/// summand: returns the basis vectors and their pivot coordinates, with
/// `basis[i][pivots[j]] = delta_ij`.
///
/// The pivots are the first coordinates, in order, on which the span is
/// independent mod l. Howell pivots are not enough here: span{(2, 1)} over
/// Z/4 is a direct summand whose Howell form has no unit pivot.
pub fn free_image_basis(r: &PrimePower, a: &Mat<BigInt>) -> Result<(Vec<Vec<BigInt>>, Vec<usize>)> {
    let cols: Vec<usize> = unit_rows(r, &a.transpose());
    let all: Vec<usize> = (0..a.rows()).collect();
    let b = a.submatrix(&all, &cols);
    let pivots = unit_rows(r, &b);
    let k: Vec<usize> = (0..cols.len()).collect();
    let inv = unit_inverse(r, &b.submatrix(&pivots, &k))
        .ok_or_else(|| Error::internal("pivot minor is not invertible"))?;
    let basis = mat::mul(r, &b, &inv);
    let every: Vec<usize> = (0..a.cols()).collect();
    if !mat::eq(r, &mat::mul(r, &basis, &a.submatrix(&pivots, &every)), &mat::reduce(r, a)) {
        return Err(Error::internal("image is not a free direct summand"));
    }
    Ok(((0..basis.cols()).map(|j| basis.col(j)).collect(), pivots))
}

/// Elementary-divisor exponents of `a` over Z/l^N, one per min(rows, cols);
/// zero divisors report `N`.
pub fn smith_exponents(r: &PrimePower, a: &Mat<BigInt>) -> Vec<u32> {
    let mut m = a.map(|x| r.reduce(x));
    let n = m.rows().min(m.cols());
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..m.rows() {
            for j in k..m.cols() {
                let x = m.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let v = r.valuation(x);
                if best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                    if v == 0 {
                        break;
                    }
                }
            }
            if best.is_some_and(|b| b.0 == 0) {
                break;
            }
        }
        let Some((v, pi, pj)) = best else {
            out.extend(std::iter::repeat(r.precision()).take(n - k));
            break;
        };
        m.swap_rows(k, pi);
        for i in 0..m.rows() {
            let t = m.get(i, k).clone();
            m.set(i, k, m.get(i, pj).clone());
            m.set(i, pj, t);
        }
        let lv = r.ell_pow(v);
        let unit = m.get(k, k) / &lv;
        let uinv = r.inv(&unit).unwrap();
        for i in k + 1..m.rows() {
            if m.get(i, k).is_zero() {
                continue;
            }
            let q = r.mul(&(m.get(i, k) / &lv), &uinv);
            for j in k..m.cols() {
                let val = r.sub(m.get(i, j), &r.mul(&q, m.get(k, j)));
                m.set(i, j, val);
            }
        }
        for j in k + 1..m.cols() {
            if m.get(k, j).is_zero() {
                continue;
            }
            let q = r.mul(&(m.get(k, j) / &lv), &uinv);
            for i in k..m.rows() {
                let val = r.sub(m.get(i, j), &r.mul(&q, m.get(i, k)));
                m.set(i, j, val);
            }
        }
        out.push(v);
    }
    out
}

/// Inverse of a square matrix that is invertible modulo l.
pub fn unit_inverse(r: &PrimePower, a: &Mat<BigInt>) -> Option<Mat<BigInt>> {
    let n = a.rows();
    let id = mat::identity(r, n);
    let mut m = Mat::from_fn(n, 2 * n, |i, j| if j < n { r.reduce(a.get(i, j)) } else { id.get(i, j - n).clone() });
    for c in 0..n {
        let p = (c..n).find(|&i| r.is_unit(m.get(i, c)))?;
        m.swap_rows(c, p);
        let inv = r.inv(m.get(c, c)).unwrap();
        for j in 0..2 * n {
            let v = r.mul(m.get(c, j), &inv);
            m.set(c, j, v);
        }
        for i in 0..n {
            if i == c || m.get(i, c).is_zero() {
                continue;
            }
            let q = m.get(i, c).clone();
            for j in 0..2 * n {
                let v = r.sub(m.get(i, j), &r.mul(&q, m.get(c, j)));
                m.set(i, j, v);
            }
        }
    }
    Some(Mat::from_fn(n, n, |i, j| m.get(i, j + n).clone()))
}

/// Rows of `a` whose reductions mod l are independent and span the row
/// space mod l (greedy, in order).
pub fn unit_rows(r: &PrimePower, a: &Mat<BigInt>) -> Vec<usize> {
    let f = r.residue_field();
    let rows: Vec<Vec<BigInt>> = a.to_rows().into_iter().map(|row| row.iter().map(|x| f.reduce(x)).collect()).collect();
    field::independent_subset(&f, &rows)
}

/// Solve `A x = b` over Z/l^N for `A` with full column rank modulo l.
/// The solution is unique; every equation is verified.
pub fn solve_full_column_rank(r: &PrimePower, a: &Mat<BigInt>, b: &[BigInt]) -> Result<Vec<BigInt>> {
    let rows = unit_rows(r, a);
    if rows.len() != a.cols() {
        return Err(Error::internal("coefficient matrix is not of full rank modulo l"));
    }
    let cols: Vec<usize> = (0..a.cols()).collect();
    let sub = a.submatrix(&rows, &cols);
    let inv = unit_inverse(r, &sub).ok_or_else(|| Error::internal("selected minor is not a unit"))?;
    let rhs: Vec<BigInt> = rows.iter().map(|&i| r.reduce(&b[i])).collect();
    let x = mat::mul_vec(r, &inv, &rhs);
    let check = mat::mul_vec(r, &a.map(|v| r.reduce(v)), &x);
    for (i, (lhs, rhs)) in check.iter().zip(b).enumerate() {
        if !r.is_zero(&r.sub(lhs, &r.reduce(rhs))) {
            return Err(Error::internal(format!("inconsistent linear system at equation {i}")));
        }
    }
    Ok(x)
}

/// Determinant over Z/l^N by Berkowitz (sign-adjusted constant term).
pub fn det(r: &PrimePower, a: &Mat<BigInt>) -> BigInt {
    let cp = mat::charpoly(r, a);
    let c0 = cp.first().cloned().unwrap_or_else(BigInt::zero);
    if a.rows() % 2 == 1 {
        r.neg(&c0)
    } else {
        c0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(r: &PrimePower, rows: &[Vec<i64>]) -> Mat<BigInt> {
        mat::from_i64(r, rows)
    }

    #[test]
    fn howell_form_is_saturated() {
        let r = PrimePower::new(2, 3).unwrap();
        // Span of (2, 1): contains 4*(2,1) = (0, 4), which the form must expose.
        let h = howell_form(&r, &m(&r, &[vec![2, 1]]));
        assert_eq!(h, m(&r, &[vec![2, 1], vec![0, 4]]));
        // Same span presented differently.
        let h2 = howell_form(&r, &m(&r, &[vec![6, 3], vec![0, 4]]));
        assert_eq!(h, h2);
    }

    #[test]
    fn free_image_without_unit_howell_pivot() {
        let r = PrimePower::new(2, 2).unwrap();
        // Projection onto span{(2, 1)} along (1, 0).
        let e = m(&r, &[vec![0, 2], vec![0, 1]]);
        let (basis, pivots) = free_image_basis(&r, &e).unwrap();
        assert_eq!(pivots, vec![1]);
        assert_eq!(basis, vec![vec![BigInt::from(2), BigInt::from(1)]]);
        assert!(free_image_basis(&r, &m(&r, &[vec![2, 0], vec![0, 1]])).is_err());
    }

    #[test]
    fn smith_exponents_detect_valuations() {
        let r = PrimePower::new(5, 4).unwrap();
        let a = m(&r, &[vec![5, 0], vec![0, 25]]);
        let mut s = smith_exponents(&r, &a);
        s.sort();
        assert_eq!(s, vec![1, 2]);
        assert_eq!(smith_exponents(&r, &m(&r, &[vec![0, 0], vec![0, 0]])), vec![4, 4]);
    }

    #[test]
    fn full_rank_solve_roundtrips() {
        let r = PrimePower::new(3, 4).unwrap();
        let a = m(&r, &[vec![3, 1], vec![1, 0], vec![2, 2]]);
        let x = vec![BigInt::from(7), BigInt::from(40)];
        let b = mat::mul_vec(&r, &a, &x);
        assert_eq!(solve_full_column_rank(&r, &a, &b).unwrap(), x);
    }
}
