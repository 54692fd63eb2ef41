//! Gaussian elimination over a field.

use super::mat::{self, Mat};
use crate::arith::ring::Field;

/// Reduced row echelon form and pivot columns.
pub fn rref<F: Field>(f: &F, a: &Mat<F::Elem>) -> (Mat<F::Elem>, Vec<usize>) {
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols() {
        if r == m.rows() {
            break;
        }
        let Some(p) = (r..m.rows()).find(|&i| !f.is_zero(m.get(i, c))) else {
            continue;
        };
        m.swap_rows(r, p);
        let inv = f.inv(m.get(r, c)).unwrap();
        for j in 0..m.cols() {
            let v = f.mul(m.get(r, j), &inv);
            m.set(r, j, v);
        }
        for i in 0..m.rows() {
            if i == r || f.is_zero(m.get(i, c)) {
                continue;
            }
            let factor = m.get(i, c).clone();
            for j in 0..m.cols() {
                let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank<F: Field>(f: &F, a: &Mat<F::Elem>) -> usize {
    rref(f, a).1.len()
}

/// Basis of the right kernel `{x : A x = 0}`, returned as vectors.
pub fn kernel<F: Field>(f: &F, a: &Mat<F::Elem>) -> Vec<Vec<F::Elem>> {
    let (m, pivots) = rref(f, a);
    let n = a.cols();
    let mut out = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![f.zero(); n];
        v[free] = f.one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(m.get(row, free));
        }
        out.push(v);
    }
    out
}

/// Some solution of `A x = b`, if one exists.
pub fn solve<F: Field>(f: &F, a: &Mat<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    assert_eq!(a.rows(), b.len());
    let aug = Mat::from_fn(a.rows(), a.cols() + 1, |i, j| {
        if j < a.cols() {
            a.get(i, j).clone()
        } else {
            b[i].clone()
        }
    });
    let (m, pivots) = rref(f, &aug);
    if pivots.last() == Some(&a.cols()) {
        return None;
    }
    let mut x = vec![f.zero(); a.cols()];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = m.get(row, a.cols()).clone();
    }
    Some(x)
}

pub fn inverse<F: Field>(f: &F, a: &Mat<F::Elem>) -> Option<Mat<F::Elem>> {
    assert!(a.is_square());
    let n = a.rows();
    let id = mat::identity(f, n);
    let aug = Mat::from_fn(n, 2 * n, |i, j| if j < n { a.get(i, j).clone() } else { id.get(i, j - n).clone() });
    let (m, pivots) = rref(f, &aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(Mat::from_fn(n, n, |i, j| m.get(i, j + n).clone()))
}

/// Echelon basis of a growing span. Each stored row keeps its expression in
/// terms of the independent vectors inserted so far, so membership tests and
/// coordinates cost one reduction pass instead of a fresh elimination.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    f: F,
    /// (pivot column, row with 1 at the pivot, coefficients on `inserted`).
    rows: Vec<(usize, Vec<F::Elem>, Vec<F::Elem>)>,
}

impl<F: Field> Echelon<F> {
    pub fn new(f: &F) -> Self {
        Echelon { f: f.clone(), rows: Vec::new() }
    }

    /// Number of independent vectors inserted.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `v` minus its projection onto the span, and the coefficients (on the
    /// inserted vectors) of what was removed.
    fn reduce(&self, v: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
        let f = &self.f;
        let mut rem = v.to_vec();
        let mut coeffs = vec![f.zero(); self.rows.len()];
        // Row i is zero at the pivots of rows before it, so one pass in
        // insertion order never reintroduces a cleared pivot.
        for (pc, row, comb) in &self.rows {
            let a = rem[*pc].clone();
            if f.is_zero(&a) {
                continue;
            }
            for (x, y) in rem.iter_mut().zip(row) {
                *x = f.sub(x, &f.mul(&a, y));
            }
            for (c, y) in coeffs.iter_mut().zip(comb) {
                *c = f.add(c, &f.mul(&a, y));
            }
        }
        (rem, coeffs)
    }

    /// Add `v` if it is independent of the span; returns whether it was.
    pub fn insert(&mut self, v: &[F::Elem]) -> bool {
        let f = &self.f;
        let (rem, coeffs) = self.reduce(v);
        let Some(pc) = rem.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&rem[pc]).expect("nonzero in a field");
        let row: Vec<F::Elem> = rem.iter().map(|x| f.mul(x, &inv)).collect();
        // row = (v - sum coeffs_j inserted_j) / pivot.
        let mut comb: Vec<F::Elem> = coeffs.iter().map(|c| f.neg(&f.mul(c, &inv))).collect();
        comb.push(inv);
        for (_, _, c) in self.rows.iter_mut() {
            c.push(f.zero());
        }
        self.rows.push((pc, row, comb));
        true
    }

    /// Coordinates of `v` on the inserted vectors, if it lies in the span.
    pub fn express(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let (rem, coeffs) = self.reduce(v);
        rem.iter().all(|x| self.f.is_zero(x)).then_some(coeffs)
    }
}

/// Indices of a maximal linearly independent subset of the given vectors,
/// chosen greedily in order.
pub fn independent_subset<F: Field>(f: &F, vectors: &[Vec<F::Elem>]) -> Vec<usize> {
    let mut ech = Echelon::new(f);
    (0..vectors.len()).filter(|&i| ech.insert(&vectors[i])).collect()
}

/// Row basis of the span of the given vectors (reduced echelon rows).
pub fn row_space<F: Field>(f: &F, vectors: &[Vec<F::Elem>], dim: usize) -> Vec<Vec<F::Elem>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Mat::from_rows(vectors.to_vec());
    debug_assert_eq!(m.cols(), dim);
    let (r, piv) = rref(f, &m);
    (0..piv.len()).map(|i| r.row(i).to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ring::{PrimeField, Ring};

    #[test]
    fn echelon_coordinates() {
        let f = PrimeField::new(5).unwrap();
        let v = |xs: &[i64]| xs.iter().map(|&x| f.reduce(&x.into())).collect::<Vec<_>>();
        let mut e = Echelon::new(&f);
        assert!(e.insert(&v(&[1, 2, 3])));
        assert!(e.insert(&v(&[0, 1, 1])));
        assert!(!e.insert(&v(&[1, 3, 4])));
        assert_eq!(e.express(&v(&[1, 4, 0])), Some(v(&[1, 2])));
        assert_eq!(e.express(&v(&[0, 0, 1])), None);
        assert_eq!(e.len(), 2);
    }

    #[test]
    fn kernel_and_inverse_mod_5() {
        let f = PrimeField::new(5).unwrap();
        let a = mat::from_i64(&f, &[vec![1, 2], vec![2, 4]]);
        let k = kernel(&f, &a);
        assert_eq!(k.len(), 1);
        assert!(mat::mul_vec(&f, &a, &k[0]).iter().all(|x| f.is_zero(x)));
        assert!(inverse(&f, &a).is_none());
        let b = mat::from_i64(&f, &[vec![1, 2], vec![3, 4]]);
        let bi = inverse(&f, &b).unwrap();
        assert_eq!(mat::mul(&f, &b, &bi), mat::identity(&f, 2));
    }
}
