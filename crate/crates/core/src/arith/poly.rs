//! Dense univariate polynomials over a [`Ring`] context.
//!
//! A polynomial is a coefficient vector, lowest degree first, with no
//! trailing zeros; the zero polynomial is the empty vector.

use super::ring::{Field, Ring};

pub type Poly<E> = Vec<E>;

pub fn trim<R: Ring>(r: &R, mut p: Poly<R::Elem>) -> Poly<R::Elem> {
    while p.last().is_some_and(|c| r.is_zero(c)) {
        p.pop();
    }
    p
}

/// Degree; `None` for the zero polynomial.
pub fn degree<E>(p: &[E]) -> Option<usize> {
    p.len().checked_sub(1)
}

pub fn from_i64<R: Ring>(r: &R, coeffs: &[i64]) -> Poly<R::Elem> {
    trim(r, coeffs.iter().map(|&c| r.from_i64(c)).collect())
}

pub fn monomial<R: Ring>(r: &R, c: R::Elem, k: usize) -> Poly<R::Elem> {
    let mut p = vec![r.zero(); k + 1];
    p[k] = c;
    trim(r, p)
}

pub fn x_minus<R: Ring>(r: &R, c: &R::Elem) -> Poly<R::Elem> {
    trim(r, vec![r.neg(c), r.one()])
}

pub fn add<R: Ring>(r: &R, a: &[R::Elem], b: &[R::Elem]) -> Poly<R::Elem> {
    let n = a.len().max(b.len());
    let z = r.zero();
    let out = (0..n).map(|i| r.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
    trim(r, out)
}

pub fn sub<R: Ring>(r: &R, a: &[R::Elem], b: &[R::Elem]) -> Poly<R::Elem> {
    let n = a.len().max(b.len());
    let z = r.zero();
    let out = (0..n).map(|i| r.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
    trim(r, out)
}

pub fn neg<R: Ring>(r: &R, a: &[R::Elem]) -> Poly<R::Elem> {
    a.iter().map(|c| r.neg(c)).collect()
}

pub fn scale<R: Ring>(r: &R, a: &[R::Elem], c: &R::Elem) -> Poly<R::Elem> {
    trim(r, a.iter().map(|x| r.mul(x, c)).collect())
}

pub fn mul<R: Ring>(r: &R, a: &[R::Elem], b: &[R::Elem]) -> Poly<R::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![r.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if r.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = r.add(&out[i + j], &r.mul(x, y));
        }
    }
    trim(r, out)
}

pub fn pow<R: Ring>(r: &R, a: &[R::Elem], mut k: u64) -> Poly<R::Elem> {
    let mut acc = vec![r.one()];
    let mut base = a.to_vec();
    while k > 0 {
        if k & 1 == 1 {
            acc = mul(r, &acc, &base);
        }
        k >>= 1;
        if k > 0 {
            base = mul(r, &base, &base);
        }
    }
    trim(r, acc)
}

/// Horner evaluation at an element of the same ring.
pub fn eval<R: Ring>(r: &R, p: &[R::Elem], x: &R::Elem) -> R::Elem {
    let mut acc = r.zero();
    for c in p.iter().rev() {
        acc = r.add(&r.mul(&acc, x), c);
    }
    acc
}

pub fn derivative<R: Ring>(r: &R, p: &[R::Elem]) -> Poly<R::Elem> {
    let out = p.iter().enumerate().skip(1).map(|(i, c)| r.mul(&r.from_i64(i as i64), c)).collect();
    trim(r, out)
}

pub fn is_monic<R: Ring>(r: &R, p: &[R::Elem]) -> bool {
    p.last().is_some_and(|c| r.is_one(c))
}

/// Division by a monic polynomial, valid over any commutative ring.
pub fn divrem_monic<R: Ring>(
    r: &R,
    a: &[R::Elem],
    m: &[R::Elem],
) -> (Poly<R::Elem>, Poly<R::Elem>) {
    debug_assert!(is_monic(r, m));
    let dm = m.len() - 1;
    let mut rem = trim(r, a.to_vec());
    if rem.len() <= dm {
        return (Vec::new(), rem);
    }
    let mut q = vec![r.zero(); rem.len() - dm];
    while rem.len() > dm {
        let k = rem.len() - 1 - dm;
        let c = rem.last().unwrap().clone();
        for (i, mc) in m.iter().enumerate() {
            rem[k + i] = r.sub(&rem[k + i], &r.mul(&c, mc));
        }
        q[k] = c;
        rem.pop();
        rem = trim(r, rem);
    }
    (trim(r, q), rem)
}

pub fn rem_monic<R: Ring>(r: &R, a: &[R::Elem], m: &[R::Elem]) -> Poly<R::Elem> {
    divrem_monic(r, a, m).1
}

pub fn mulmod<R: Ring>(r: &R, a: &[R::Elem], b: &[R::Elem], m: &[R::Elem]) -> Poly<R::Elem> {
    rem_monic(r, &mul(r, a, b), m)
}

pub fn powmod<R: Ring>(r: &R, a: &[R::Elem], k: &num_bigint::BigUint, m: &[R::Elem]) -> Poly<R::Elem> {
    let mut acc = rem_monic(r, &[r.one()], m);
    let base = rem_monic(r, a, m);
    for i in (0..k.bits()).rev() {
        acc = mulmod(r, &acc, &acc, m);
        if k.bit(i) {
            acc = mulmod(r, &acc, &base, m);
        }
    }
    acc
}

/// Compose `p(q(x))`.
pub fn compose<R: Ring>(r: &R, p: &[R::Elem], q: &[R::Elem]) -> Poly<R::Elem> {
    let mut acc: Poly<R::Elem> = Vec::new();
    for c in p.iter().rev() {
        acc = add(r, &mul(r, &acc, q), &[c.clone()]);
    }
    acc
}

/// Scale to a monic polynomial over a field.
pub fn make_monic<F: Field>(f: &F, p: &[F::Elem]) -> Poly<F::Elem> {
    match p.last() {
        None => Vec::new(),
        Some(lc) => {
            let inv = f.inv(lc).expect("leading coefficient of a trimmed polynomial is nonzero");
            scale(f, p, &inv)
        }
    }
}

pub fn divrem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Poly<F::Elem>, Poly<F::Elem>) {
    let lc = b.last().expect("division by zero polynomial");
    let inv = f.inv(lc).expect("nonzero leading coefficient");
    let bm = scale(f, b, &inv);
    let (q, r) = divrem_monic(f, a, &bm);
    (scale(f, &q, &inv), r)
}

/// Monic gcd over a field.
pub fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
    let mut x = trim(f, a.to_vec());
    let mut y = trim(f, b.to_vec());
    while !y.is_empty() {
        let r = divrem(f, &x, &y).1;
        x = y;
        y = r;
    }
    make_monic(f, &x)
}

/// Extended gcd: returns `(g, s, t)` with `s*a + t*b = g`, `g` monic.
pub fn xgcd<F: Field>(
    f: &F,
    a: &[F::Elem],
    b: &[F::Elem],
) -> (Poly<F::Elem>, Poly<F::Elem>, Poly<F::Elem>) {
    let (mut r0, mut r1) = (trim(f, a.to_vec()), trim(f, b.to_vec()));
    let (mut s0, mut s1) = (vec![f.one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![f.one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s2 = sub(f, &s0, &mul(f, &q, &s1));
        let t2 = sub(f, &t0, &mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match r0.last() {
        None => (Vec::new(), s0, t0),
        Some(lc) => {
            let inv = f.inv(lc).unwrap();
            (scale(f, &r0, &inv), scale(f, &s0, &inv), scale(f, &t0, &inv))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ring::{Integers, PrimeField};
    use num_bigint::BigInt;

    fn z(v: &[i64]) -> Poly<BigInt> {
        from_i64(&Integers, v)
    }

    #[test]
    fn monic_division_over_integers() {
        let (q, r) = divrem_monic(&Integers, &z(&[1, 0, 0, 1]), &z(&[1, 1]));
        assert_eq!(q, z(&[1, -1, 1]));
        assert!(r.is_empty());
        assert_eq!(eval(&Integers, &z(&[-6, 0, 1]), &BigInt::from(3)), BigInt::from(3));
        assert_eq!(derivative(&Integers, &z(&[5, 3, 2])), z(&[3, 4]));
    }

    #[test]
    fn gcd_over_prime_field() {
        let f = PrimeField::new(5).unwrap();
        let a = mul(&f, &from_i64(&f, &[-1, 1]), &from_i64(&f, &[-2, 1]));
        let b = mul(&f, &from_i64(&f, &[-1, 1]), &from_i64(&f, &[-3, 1]));
        assert_eq!(gcd(&f, &a, &b), from_i64(&f, &[-1, 1]));
        let (g, s, t) = xgcd(&f, &a, &b);
        assert_eq!(add(&f, &mul(&f, &s, &a), &mul(&f, &t, &b)), g);
    }
}
