//! Dense row-major matrices whose arithmetic is driven by a ring context.

use num_bigint::BigInt;

use crate::arith::poly::{self, Poly};
use crate::arith::ring::{Field, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Mat<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let data: Vec<E> = rows.into_iter().flatten().collect();
        Mat::from_vec(r, c, data)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [E] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn map<F>(&self, f: impl Fn(&E) -> F) -> Mat<F> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Rows `rs` and columns `cs`.
    pub fn submatrix(&self, rs: &[usize], cs: &[usize]) -> Self {
        Mat::from_fn(rs.len(), cs.len(), |i, j| self.get(rs[i], cs[j]).clone())
    }

    /// Stack columns given as vectors.
    pub fn from_cols(cols: &[Vec<E>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |x| x.len());
        Mat::from_fn(r, c, |i, j| cols[j][i].clone())
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }
}

pub fn zeros<R: Ring>(r: &R, rows: usize, cols: usize) -> Mat<R::Elem> {
    Mat::from_vec(rows, cols, vec![r.zero(); rows * cols])
}

pub fn identity<R: Ring>(r: &R, n: usize) -> Mat<R::Elem> {
    Mat::from_fn(n, n, |i, j| if i == j { r.one() } else { r.zero() })
}

pub fn from_i64<R: Ring>(r: &R, rows: &[Vec<i64>]) -> Mat<R::Elem> {
    Mat::from_rows(rows.iter().map(|row| row.iter().map(|&x| r.from_i64(x)).collect()).collect())
}

/// Reduce an integer matrix into the ring.
pub fn reduce<R: Ring>(r: &R, m: &Mat<BigInt>) -> Mat<R::Elem> {
    m.map(|x| r.from_bigint(x))
}

pub fn add<R: Ring>(r: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Mat<R::Elem> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    Mat { rows: a.rows, cols: a.cols, data: a.data.iter().zip(&b.data).map(|(x, y)| r.add(x, y)).collect() }
}

pub fn sub<R: Ring>(r: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Mat<R::Elem> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    Mat { rows: a.rows, cols: a.cols, data: a.data.iter().zip(&b.data).map(|(x, y)| r.sub(x, y)).collect() }
}

pub fn scale<R: Ring>(r: &R, a: &Mat<R::Elem>, c: &R::Elem) -> Mat<R::Elem> {
    a.map(|x| r.mul(x, c))
}

pub fn mul<R: Ring>(r: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Mat<R::Elem> {
    assert_eq!(a.cols, b.rows, "matrix product shapes");
    let bt = b.transpose();
    Mat::from_fn(a.rows, b.cols, |i, j| r.dot(a.row(i), bt.row(j)))
}

pub fn mul_vec<R: Ring>(r: &R, a: &Mat<R::Elem>, v: &[R::Elem]) -> Vec<R::Elem> {
    assert_eq!(a.cols, v.len());
    (0..a.rows)
        .map(|i| {
            r.dot(a.row(i), v)
        })
        .collect()
}

pub fn pow<R: Ring>(r: &R, a: &Mat<R::Elem>, mut k: u64) -> Mat<R::Elem> {
    let mut acc = identity(r, a.rows);
    let mut base = a.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc = mul(r, &acc, &base);
        }
        k >>= 1;
        if k > 0 {
            base = mul(r, &base, &base);
        }
    }
    acc
}

pub fn is_zero<R: Ring>(r: &R, a: &Mat<R::Elem>) -> bool {
    a.data.iter().all(|x| r.is_zero(x))
}

pub fn eq<R: Ring>(r: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> bool {
    (a.rows, a.cols) == (b.rows, b.cols) && a.data.iter().zip(&b.data).all(|(x, y)| r.is_zero(&r.sub(x, y)))
}

pub fn trace<R: Ring>(r: &R, a: &Mat<R::Elem>) -> R::Elem {
    let mut acc = r.zero();
    for i in 0..a.rows.min(a.cols) {
        acc = r.add(&acc, a.get(i, i));
    }
    acc
}

pub fn commute<R: Ring>(r: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> bool {
    eq(r, &mul(r, a, b), &mul(r, b, a))
}

/// Evaluate a polynomial at a square matrix.
pub fn eval_poly<R: Ring>(r: &R, p: &[R::Elem], a: &Mat<R::Elem>) -> Mat<R::Elem> {
    let mut acc = zeros(r, a.rows, a.cols);
    for c in p.iter().rev() {
        acc = mul(r, &acc, a);
        for i in 0..a.rows {
            let v = r.add(acc.get(i, i), c);
            acc.set(i, i, v);
        }
    }
    acc
}

/// Characteristic polynomial `det(x - A)` by Berkowitz's division-free
/// algorithm; valid over any commutative ring.
pub fn charpoly<R: Ring>(r: &R, a: &Mat<R::Elem>) -> Poly<R::Elem> {
    assert!(a.is_square());
    let n = a.rows;
    if n == 0 {
        return vec![r.one()];
    }
    // Coefficients highest degree first while iterating.
    let mut c: Vec<R::Elem> = vec![r.one(), r.neg(a.get(0, 0))];
    for k in 1..n {
        // A partitioned as [[M, R],[S, a_kk]] with M the leading k x k block.
        let row: Vec<R::Elem> = (0..k).map(|j| a.get(k, j).clone()).collect();
        let col: Vec<R::Elem> = (0..k).map(|i| a.get(i, k).clone()).collect();
        let akk = a.get(k, k).clone();
        // Toeplitz column: 1, -a_kk, -S R, -S M R, ..., -S M^{k-1} R.
        let mut t = Vec::with_capacity(k + 2);
        t.push(r.one());
        t.push(r.neg(&akk));
        let mut v = col;
        for _ in 0..k {
            let s = dot(r, &row, &v);
            t.push(r.neg(&s));
            v = (0..k).map(|i| {
                let mut acc = r.zero();
                for j in 0..k {
                    acc = r.add(&acc, &r.mul(a.get(i, j), &v[j]));
                }
                acc
            }).collect();
        }
        // New coefficients = lower-triangular Toeplitz(t) (size (k+2) x (k+1)) times c.
        let mut nc = Vec::with_capacity(k + 2);
        for i in 0..k + 2 {
            let mut acc = r.zero();
            for j in 0..=i.min(k) {
                if i - j < t.len() {
                    acc = r.add(&acc, &r.mul(&t[i - j], &c[j]));
                }
            }
            nc.push(acc);
        }
        c = nc;
    }
    c.reverse();
    poly::trim(r, c)
}

pub fn dot<R: Ring>(r: &R, a: &[R::Elem], b: &[R::Elem]) -> R::Elem {
    r.dot(a, b)
}

pub fn check_square<E: Clone>(m: &Mat<E>, d: usize, what: &str) -> Result<()> {
    if m.rows() != d || m.cols() != d {
        return Err(Error::Dimension(format!(
            "{what}: expected {d}x{d}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Minimal polynomial over a field via the Krylov sequence of the identity
/// in matrix space.
pub fn minpoly<F: Field>(f: &F, a: &Mat<F::Elem>) -> Poly<F::Elem> {
    let n = a.rows;
    let mut powers = super::field::Echelon::new(f);
    let mut cur = identity(f, n);
    // The first power in the span of the previous ones gives the relation.
    while powers.insert(&cur.data) {
        cur = mul(f, &cur, a);
        assert!(powers.len() <= n, "minimal polynomial degree exceeds dimension");
    }
    let sol = powers.express(&cur.data).expect("dependent on the previous powers");
    let mut p: Vec<F::Elem> = sol.iter().map(|x| f.neg(x)).collect();
    p.push(f.one());
    poly::trim(f, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ring::{Integers, PrimeField};

    #[test]
    fn berkowitz_matches_known_charpoly() {
        let z = Integers;
        let a = from_i64(&z, &[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]);
        // det(xI - A) = x^3 - 9x^2 + 24x - 18
        assert_eq!(charpoly(&z, &a), poly::from_i64(&z, &[-18, 24, -9, 1]));
        let c = charpoly(&z, &a);
        assert!(is_zero(&z, &eval_poly(&z, &c, &a)));
    }

    #[test]
    fn minpoly_of_scalar_is_linear() {
        let f = PrimeField::new(7).unwrap();
        let a = from_i64(&f, &[vec![3, 0], vec![0, 3]]);
        assert_eq!(minpoly(&f, &a), poly::from_i64(&f, &[-3, 1]));
    }
}
