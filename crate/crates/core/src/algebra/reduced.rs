//! The order generated by commuting integer matrices, taken modulo its
//! nilradical, together with the trace form on the underlying space.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::commuting::{Coefficients, CommutingMatrixAlgebra};
use super::order::{vec_mat, Order};
use crate::arith::ring::{Integers, PrimeField, PrimePower, Rationals, Ring};
use crate::error::{Error, Result};
use crate::linalg::mat::{self, Mat};
use crate::linalg::{field, integer};

/// An order in `A / nil(A)` where `A` is the Q-algebra generated by the
/// matrices, with coordinates for the images of integral elements.
#[derive(Clone, Debug)]
pub struct MatrixOrder {
    pub order: Order,
    dim_v: usize,
    /// Z-basis (Hermite normal form of flattened matrices) of the ring
    /// generated by the matrices.
    span: Mat<BigInt>,
    /// Row k: order coordinates of the image of span row k.
    span_to_order: Mat<BigInt>,
    /// Trace on the underlying space of each order basis element.
    traces: Vec<BigRational>,
}

fn flatten(m: &Mat<BigInt>) -> Vec<BigInt> {
    m.data().to_vec()
}

/// Z-basis of the ring generated by `gens` inside d x d integer matrices.
fn ring_span(d: usize, gens: &[Mat<BigInt>]) -> Mat<BigInt> {
    let mut rows = vec![flatten(&mat::identity(&Integers, d))];
    rows.extend(gens.iter().map(flatten));
    let mut h = integer::hnf(&Mat::from_rows(rows));
    loop {
        let mut rows = h.to_rows();
        for b in h.to_rows() {
            let bm = Mat::from_vec(d, d, b);
            for g in gens {
                rows.push(flatten(&mat::mul(&Integers, &bm, g)));
            }
        }
        let next = integer::hnf(&Mat::from_rows(rows));
        if next == h {
            return h;
        }
        h = next;
    }
}

/// The algebra acting on itself: each generator becomes the matrix of
/// multiplication on a Z-basis of the ring the generators generate.
pub fn regular_algebra(alg: &CommutingMatrixAlgebra) -> Result<CommutingMatrixAlgebra> {
    if *alg.coefficients() != Coefficients::Integers {
        return Err(Error::Invalid("the regular representation needs integer matrices".into()));
    }
    let d = alg.dim();
    let zz = Integers;
    let gens: Vec<Mat<BigInt>> = alg.generators().iter().map(|(_, m)| m.clone()).collect();
    let span = ring_span(d, &gens);
    let basis: Vec<Mat<BigInt>> = span.to_rows().into_iter().map(|r| Mat::from_vec(d, d, r)).collect();
    let mut out = Vec::with_capacity(gens.len());
    for (label, g) in alg.generators() {
        let cols = basis
            .iter()
            .map(|b| {
                integer::coordinates(&span, mat::mul(&zz, g, b).data())
                    .ok_or_else(|| Error::internal("product left the generated ring"))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push((*label, Mat::from_cols(&cols)));
    }
    Ok(CommutingMatrixAlgebra::new_unchecked(Coefficients::Integers, span.rows(), out))
}

impl MatrixOrder {
    pub fn new(alg: &CommutingMatrixAlgebra) -> Result<Self> {
        if *alg.coefficients() != Coefficients::Integers {
            return Err(Error::Invalid("an order needs integer matrices".into()));
        }
        let d = alg.dim();
        let zz = Integers;
        let q = Rationals;
        let gens: Vec<Mat<BigInt>> = alg.generators().iter().map(|(_, m)| m.clone()).collect();
        let span = ring_span(d, &gens);
        let m = span.rows();
        let basis: Vec<Mat<BigInt>> = span.to_rows().into_iter().map(|r| Mat::from_vec(d, d, r)).collect();
        let coords = |x: &Mat<BigInt>| {
            integer::coordinates(&span, x.data()).ok_or_else(|| Error::internal("product left the generated ring"))
        };
        let mut mult = vec![vec![Vec::new(); m]; m];
        for a in 0..m {
            for b in a..m {
                let c = coords(&mat::mul(&zz, &basis[a], &basis[b]))?;
                mult[a][b] = c.clone();
                mult[b][a] = c;
            }
        }
        let one = coords(&mat::identity(&zz, d))?;
        let tr: Vec<BigInt> = basis.iter().map(|b| mat::trace(&zz, b)).collect();
        // Nilpotent elements are exactly the radical of the trace form.
        let gram = Mat::from_fn(m, m, |a, b| {
            let s: BigInt = (0..m).map(|c| &mult[a][b][c] * &tr[c]).sum();
            BigRational::from_integer(s)
        });
        let nil = field::kernel(&q, &gram);
        if nil.is_empty() {
            let order = Order::new(m, mult, one)?;
            return Ok(MatrixOrder {
                order,
                dim_v: d,
                span,
                span_to_order: mat::identity(&zz, m),
                traces: tr.into_iter().map(BigRational::from_integer).collect(),
            });
        }
        // Complement of the nilradical spanned by basis vectors.
        let mut vectors: Vec<Vec<BigRational>> = nil.clone();
        for a in 0..m {
            vectors.push((0..m).map(|i| if i == a { q.one() } else { q.zero() }).collect());
        }
        let chosen = field::independent_subset(&q, &vectors);
        let comp: Vec<usize> = chosen.iter().filter(|&&i| i >= nil.len()).map(|&i| i - nil.len()).collect();
        let delta = comp.len();
        let mut cols: Vec<Vec<BigRational>> = comp.iter().map(|&a| vectors[nil.len() + a].clone()).collect();
        cols.extend(nil.iter().cloned());
        let sinv = field::inverse(&q, &Mat::from_cols(&cols)).ok_or_else(|| Error::internal("singular complement"))?;
        // proj row a: coordinates of the image of basis element a in A/nil.
        let proj = Mat::from_fn(m, delta, |a, j| sinv.get(j, a).clone());
        let red_mult = |x: &[BigRational], y: &[BigRational]| -> Vec<BigRational> {
            let mut out = vec![q.zero(); delta];
            for (i, xi) in x.iter().enumerate() {
                for (j, yj) in y.iter().enumerate() {
                    if xi.is_zero() || yj.is_zero() {
                        continue;
                    }
                    let c = &mult[comp[i]][comp[j]];
                    let img = vec_mat(&q, &c.iter().map(|v| BigRational::from_integer(v.clone())).collect::<Vec<_>>(), &proj);
                    let s = xi * yj;
                    for (o, v) in out.iter_mut().zip(img) {
                        *o += &s * v;
                    }
                }
            }
            out
        };
        // The image of the generated ring is a lattice in A/nil.
        let den = integer::denominator(&proj);
        let scaled = proj.map(|x| (x * BigRational::from_integer(den.clone())).to_integer());
        let h = integer::hnf(&scaled);
        let w0 = h.map(|x| BigRational::new(x.clone(), den.clone()));
        let w0inv = field::inverse(&q, &w0).ok_or_else(|| Error::internal("image lattice is not of full rank"))?;
        let rows = w0.to_rows();
        let mut omult = vec![vec![Vec::new(); delta]; delta];
        for a in 0..delta {
            for b in a..delta {
                let c: Vec<BigInt> = vec_mat(&q, &red_mult(&rows[a], &rows[b]), &w0inv)
                    .iter()
                    .map(|x| x.is_integer().then(|| x.to_integer()))
                    .collect::<Option<_>>()
                    .ok_or_else(|| Error::internal("image lattice is not a ring"))?;
                omult[a][b] = c.clone();
                omult[b][a] = c;
            }
        }
        let one_q: Vec<BigRational> = vec_mat(&q, &one.iter().map(|x| BigRational::from_integer(x.clone())).collect::<Vec<_>>(), &proj);
        let oone = to_integral(&vec_mat(&q, &one_q, &w0inv))?;
        let order = Order::new(delta, omult, oone)?;
        let s2o = mat::mul(&q, &proj, &w0inv);
        let span_to_order = s2o.map(|x| x.to_integer());
        if !integer::is_integral(&s2o) {
            return Err(Error::internal("generated ring does not map into its image lattice"));
        }
        let tr_red: Vec<BigRational> = comp.iter().map(|&a| BigRational::from_integer(tr[a].clone())).collect();
        let traces = mat::mul_vec(&q, &w0, &tr_red);
        Ok(MatrixOrder { order, dim_v: d, span, span_to_order, traces })
    }

    /// Dimension of the space the matrices act on.
    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    /// The l-maximal order containing this one.
    pub fn maximal_at(&self, ell: u64) -> Result<MatrixOrder> {
        let q = Rationals;
        let (order, t) = self.order.maximal_at(ell)?;
        let tinv = field::inverse(&q, &t).ok_or_else(|| Error::internal("singular basis change"))?;
        let s2o = mat::mul(&q, &integer::to_rational(&self.span_to_order), &tinv);
        if !integer::is_integral(&s2o) {
            return Err(Error::internal("generated ring does not map into the maximal order"));
        }
        Ok(MatrixOrder {
            order,
            dim_v: self.dim_v,
            span: self.span.clone(),
            span_to_order: s2o.map(|x| x.to_integer()),
            traces: mat::mul_vec(&q, &t, &self.traces),
        })
    }

    /// Order coordinates of an integer matrix of the generated ring.
    pub fn coords(&self, m: &Mat<BigInt>) -> Result<Vec<BigInt>> {
        let c = integer::coordinates(&self.span, m.data()).ok_or(Error::NotInAlgebra)?;
        Ok(vec_mat(&Integers, &c, &self.span_to_order))
    }

    /// Order coordinates mod l of a matrix mod l in the generated ring mod l.
    /// Well defined once the order is l-maximal: an element of the
    /// generated ring that vanishes mod l as a matrix is l times an integral
    /// element, so it lies in l O.
    pub fn coords_mod_ell(&self, f: &PrimeField, m: &Mat<BigInt>) -> Result<Vec<BigInt>> {
        let a = mat::reduce(f, &self.span.transpose());
        let b: Vec<BigInt> = m.data().iter().map(|x| f.reduce(x)).collect();
        let y = field::solve(f, &a, &b).ok_or(Error::NotInAlgebra)?;
        Ok(vec_mat(f, &y, &mat::reduce(f, &self.span_to_order)))
    }

    /// Largest k with l^k dividing a trace denominator.
    pub fn trace_exponent(&self, ell: u64) -> Result<u32> {
        let ellb = BigInt::from(ell);
        let mut k = 0;
        for t in &self.traces {
            let mut den = t.denom().clone();
            let mut e = 0;
            while (&den % &ellb).is_zero() {
                den /= &ellb;
                e += 1;
            }
            if !den.is_one() {
                return Err(Error::internal("trace has a denominator prime to l"));
            }
            k = k.max(e);
        }
        Ok(k)
    }

    /// Trace on the space of `x` (order coordinates known mod l^M), which is
    /// an integer in [0, dim] for idempotents. `None` unless the precision
    /// determines it.
    pub fn idempotent_rank(&self, ring: &PrimePower, x: &[BigInt]) -> Result<Option<usize>> {
        let ell = ring.ell();
        let k = self.trace_exponent(ell)?;
        let m = ring.precision();
        if m <= k {
            return Ok(None);
        }
        let scale = BigInt::from(ell).pow(k);
        let mut s = BigInt::zero();
        for (xi, t) in x.iter().zip(&self.traces) {
            let ti = (t * BigRational::from_integer(scale.clone())).to_integer();
            s += xi * ti;
        }
        let s = ring.reduce(&s);
        if !(&s % &scale).is_zero() {
            return Err(Error::internal("trace of an idempotent is not integral"));
        }
        let modulus = BigInt::from(ell).pow(m - k);
        let v = (s / &scale).mod_floor(&modulus);
        if modulus <= BigInt::from(self.dim_v) {
            return Ok(None);
        }
        usize::try_from(v).ok().filter(|&v| v <= self.dim_v).map(Some).ok_or_else(|| {
            Error::internal("trace of an idempotent exceeds the dimension")
        })
    }
}

fn to_integral(v: &[BigRational]) -> Result<Vec<BigInt>> {
    v.iter()
        .map(|x| x.is_integer().then(|| x.to_integer()))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::internal("expected an integral vector"))
}
