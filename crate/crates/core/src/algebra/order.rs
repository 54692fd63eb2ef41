//! Orders in commutative semisimple Q-algebras, given by integer structure
//! constants. Maximal orders at l are found with the Round 2 method; an
//! l-maximal order splits over Z_l into discrete valuation rings, each of
//! which is presented as Z/l^M[x]/(g).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::commuting::{Coefficients, CommutingMatrixAlgebra};
use super::local_factor::local_factors;
use crate::arith::local_ring::{LocalRing, RingElement};
use crate::arith::ring::{Integers, PrimeField, PrimePower, Rationals, Ring};
use crate::error::{Error, Result};
use crate::linalg::mat::{self, Mat};
use crate::linalg::{field, integer, modular};

/// A commutative ring free of rank `dim` over Z with basis `u_0..u_{dim-1}`:
/// `u_a u_b = sum_c mult[a][b][c] u_c`, unit element `one`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Order {
    dim: usize,
    mult: Vec<Vec<Vec<BigInt>>>,
    one: Vec<BigInt>,
}

fn unit_vector(n: usize, a: usize) -> Vec<BigInt> {
    (0..n).map(|i| if i == a { BigInt::one() } else { BigInt::zero() }).collect()
}

/// Row vector times matrix.
pub(crate) fn vec_mat<R: Ring>(r: &R, v: &[R::Elem], m: &Mat<R::Elem>) -> Vec<R::Elem> {
    (0..m.cols())
        .map(|j| {
            let mut acc = r.zero();
            for (i, x) in v.iter().enumerate() {
                if !r.is_zero(x) {
                    acc = r.add(&acc, &r.mul(x, m.get(i, j)));
                }
            }
            acc
        })
        .collect()
}

fn rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

fn integral(v: &[BigRational]) -> Option<Vec<BigInt>> {
    v.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
}

impl Order {
    /// Structure constants must describe a commutative, associative ring
    /// with the given unit; this is checked.
    pub fn new(dim: usize, mult: Vec<Vec<Vec<BigInt>>>, one: Vec<BigInt>) -> Result<Self> {
        if mult.len() != dim || mult.iter().any(|row| row.len() != dim || row.iter().any(|v| v.len() != dim)) {
            return Err(Error::Dimension(format!("structure constants do not match rank {dim}")));
        }
        if one.len() != dim {
            return Err(Error::Dimension("unit element has the wrong length".into()));
        }
        let o = Order { dim, mult, one };
        for a in 0..dim {
            let ua = unit_vector(dim, a);
            if o.mul(&o.one, &ua) != ua {
                return Err(Error::Invalid("unit element does not act as the identity".into()));
            }
            for b in 0..dim {
                if o.mult[a][b] != o.mult[b][a] {
                    return Err(Error::Invalid("structure constants are not commutative".into()));
                }
            }
        }
        for a in 0..dim {
            for b in a..dim {
                for c in 0..dim {
                    let lhs = o.mul(&o.mult[a][b], &unit_vector(dim, c));
                    let rhs = o.mul(&unit_vector(dim, a), &o.mult[b][c]);
                    if lhs != rhs {
                        return Err(Error::Invalid("structure constants are not associative".into()));
                    }
                }
            }
        }
        Ok(o)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn one(&self) -> &[BigInt] {
        &self.one
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<BigInt>>] {
        &self.mult
    }

    pub fn mul(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        self.mul_in(&Integers, x, y)
    }

    /// Product with coordinates and structure constants taken in `r`.
    pub fn mul_in<R: Ring>(&self, r: &R, x: &[BigInt], y: &[BigInt]) -> Vec<R::Elem> {
        let n = self.dim;
        let mut out = vec![r.zero(); n];
        for a in 0..n {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..n {
                if y[b].is_zero() {
                    continue;
                }
                let xy = r.mul(&r.from_bigint(&x[a]), &r.from_bigint(&y[b]));
                for (c, slot) in out.iter_mut().enumerate() {
                    let s = &self.mult[a][b][c];
                    if !s.is_zero() {
                        *slot = r.add(slot, &r.mul(&xy, &r.from_bigint(s)));
                    }
                }
            }
        }
        out
    }

    fn mul_rational(&self, x: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
        let q = Rationals;
        let n = self.dim;
        let mut out = vec![q.zero(); n];
        for a in 0..n {
            for b in 0..n {
                if x[a].is_zero() || y[b].is_zero() {
                    continue;
                }
                let xy = &x[a] * &y[b];
                for (c, slot) in out.iter_mut().enumerate() {
                    if !self.mult[a][b][c].is_zero() {
                        *slot += &xy * BigRational::from_integer(self.mult[a][b][c].clone());
                    }
                }
            }
        }
        out
    }

    /// `x^k` in `r`, for a nonnegative exponent.
    pub fn pow_in<R: Ring<Elem = BigInt>>(&self, r: &R, x: &[BigInt], mut k: u64) -> Vec<BigInt> {
        let mut base: Vec<BigInt> = x.iter().map(|c| r.from_bigint(c)).collect();
        let mut acc: Vec<BigInt> = self.one.iter().map(|c| r.from_bigint(c)).collect();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_in(r, &acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul_in(r, &base, &base);
            }
        }
        acc
    }

    /// Matrix of multiplication by `x`: column b holds `x u_b`.
    pub fn left_matrix<R: Ring<Elem = BigInt>>(&self, r: &R, x: &[BigInt]) -> Mat<BigInt> {
        let cols: Vec<Vec<BigInt>> = (0..self.dim).map(|b| self.mul_in(r, x, &unit_vector(self.dim, b))).collect();
        Mat::from_cols(&cols)
    }

    /// The same ring on a new basis, given as rational rows in the current
    /// coordinates. Fails unless the new basis spans a ring.
    pub fn rebase(&self, basis: &Mat<BigRational>) -> Result<Order> {
        let q = Rationals;
        let n = self.dim;
        let inv = field::inverse(&q, basis).ok_or_else(|| Error::internal("basis change is singular"))?;
        let rows = basis.to_rows();
        let mut mult = vec![vec![Vec::new(); n]; n];
        for a in 0..n {
            for b in a..n {
                let prod = self.mul_rational(&rows[a], &rows[b]);
                let coords = integral(&vec_mat(&q, &prod, &inv))
                    .ok_or_else(|| Error::internal("new basis is not closed under multiplication"))?;
                mult[a][b] = coords.clone();
                mult[b][a] = coords;
            }
        }
        let one = integral(&vec_mat(&q, &rational(&self.one), &inv))
            .ok_or_else(|| Error::internal("new basis does not contain the unit"))?;
        Ok(Order { dim: n, mult, one })
    }

    /// The l-maximal order containing this one, by Round 2: repeatedly
    /// replace O by the multiplier ring of its l-radical until the two agree.
    /// Returns the new order and its basis as rational rows in the current
    /// coordinates. The ambient Q-algebra must be reduced.
    pub fn maximal_at(&self, ell: u64) -> Result<(Order, Mat<BigRational>)> {
        let q = Rationals;
        let f = PrimeField::new(ell)?;
        let n = self.dim;
        let ellb = BigInt::from(ell);
        let ell_rows: Vec<Vec<BigInt>> = (0..n).map(|a| unit_vector(n, a).iter().map(|x| x * &ellb).collect()).collect();
        let mut cur = self.clone();
        let mut total = mat::identity(&q, n);
        let mut qpow = ell;
        while (qpow as usize) < n {
            qpow *= ell;
        }
        // Each pass multiplies the discriminant by l^-2 at least, so this
        // bounds the number of passes generously.
        for _ in 0..64 * n.max(1) {
            // I / lO is the nilradical of O / lO: the kernel of x -> x^q.
            let frob: Vec<Vec<BigInt>> = (0..n).map(|a| cur.pow_in(&f, &unit_vector(n, a), qpow)).collect();
            let nil = field::kernel(&f, &Mat::from_rows(frob).transpose());
            let mut rows = ell_rows.clone();
            rows.extend(nil);
            let ideal = integer::hnf(&Mat::from_rows(rows));
            let ideal_inv = field::inverse(&q, &integer::to_rational(&ideal))
                .ok_or_else(|| Error::internal("radical is not of full rank"))?;
            // y lies in U iff y I is inside l I; the test is linear mod l.
            let mut big = Mat::from_fn(n, n * n, |_, _| BigInt::zero());
            for a in 0..n {
                let ua = unit_vector(n, a);
                for b in 0..n {
                    let prod = cur.mul(&ua, ideal.row(b));
                    let coords = integral(&vec_mat(&q, &rational(&prod), &ideal_inv))
                        .ok_or_else(|| Error::internal("radical is not an ideal"))?;
                    for (c, x) in coords.iter().enumerate() {
                        big.set(a, b * n + c, f.reduce(x));
                    }
                }
            }
            let ker = field::kernel(&f, &big.transpose());
            if ker.is_empty() {
                return Ok((cur, total));
            }
            let mut rows = ell_rows.clone();
            rows.extend(ker);
            let u = integer::hnf(&Mat::from_rows(rows));
            let inv_ell = BigRational::new(BigInt::one(), ellb.clone());
            let new_basis = integer::to_rational(&u).map(|x| x * &inv_ell);
            cur = cur.rebase(&new_basis)?;
            total = mat::mul(&q, &new_basis, &total);
        }
        Err(Error::internal("Round 2 did not terminate"))
    }

    /// The DVR components of this order over Z/l^M. The order must be
    /// maximal at l. Components follow the order of the primitive
    /// idempotents.
    pub fn components(&self, ring: &PrimePower) -> Result<Vec<DvrComponent>> {
        let n = self.dim;
        let gens: Vec<(u64, Mat<BigInt>)> =
            (0..n).map(|a| (a as u64 + 2, self.left_matrix(&Integers, &unit_vector(n, a)))).collect();
        let alg = CommutingMatrixAlgebra::new_unchecked(Coefficients::Integers, n, gens);
        let one = mat::reduce(ring, &Mat::from_vec(n, 1, self.one.clone())).col(0);
        let mut out = Vec::new();
        for fac in local_factors(&alg, ring)? {
            let idempotent = mat::mul_vec(ring, &fac.idempotent, &one);
            let delta = fac.rank();
            let fdeg = fac.residue_degree as usize;
            if fdeg == 0 || delta % fdeg != 0 {
                return Err(Error::internal("component rank is not a multiple of its residue degree"));
            }
            let e = (delta / fdeg) as u32;
            let unit: Vec<BigInt> = fac.pivots.iter().map(|&p| idempotent[p].clone()).collect();
            let projected: Vec<&Mat<BigInt>> =
                (0..n).map(|a| fac.projected(a as u64 + 2).expect("every basis element is a generator")).collect();
            let mut found = None;
            for c in generator_candidates(delta, ring.ell()) {
                let mut theta = vec![BigInt::zero(); n];
                for (ck, bk) in c.iter().zip(&fac.basis) {
                    for (t, b) in theta.iter_mut().zip(bk) {
                        *t = ring.add(t, &ring.mul(ck, b));
                    }
                }
                let mut m_theta = mat::zeros(ring, delta, delta);
                for (t, p) in theta.iter().zip(&projected) {
                    if !t.is_zero() {
                        m_theta = mat::add(ring, &m_theta, &mat::scale(ring, p, t));
                    }
                }
                let mut cols = vec![unit.clone()];
                for i in 1..delta {
                    let next = mat::mul_vec(ring, &m_theta, &cols[i - 1]);
                    cols.push(next);
                }
                if let Some(kinv) = modular::unit_inverse(ring, &Mat::from_cols(&cols)) {
                    found = Some((m_theta, kinv));
                    break;
                }
            }
            let (m_theta, kinv) =
                found.ok_or_else(|| Error::internal("no generator found for a component of a maximal order"))?;
            let g = mat::charpoly(ring, &m_theta);
            let local = LocalRing::new(ring.ell(), ring.precision(), &g, e)?;
            out.push(DvrComponent { base: ring.clone(), ring: local, idempotent, pivots: fac.pivots.clone(), kinv });
        }
        Ok(out)
    }
}

/// Coordinate vectors tried as ring generators of a component of rank
/// `delta`: 0 for rank one, then basis vectors, then seeded random vectors.
fn generator_candidates(delta: usize, ell: u64) -> impl Iterator<Item = Vec<BigInt>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ ell ^ (delta as u64) << 32);
    let mut k = 0usize;
    std::iter::from_fn(move || {
        k += 1;
        if delta == 1 {
            return (k == 1).then(|| vec![BigInt::zero()]);
        }
        if k > 512 + delta {
            return None;
        }
        if k <= delta {
            return Some(unit_vector(delta, k - 1));
        }
        Some((0..delta).map(|_| BigInt::from(rng.gen_range(0..ell))).collect())
    })
}

/// One DVR factor `eps O` of an l-maximal order, presented as a LocalRing
/// through a generator of the factor.
#[derive(Clone, Debug)]
pub struct DvrComponent {
    base: PrimePower,
    pub ring: LocalRing,
    /// The component idempotent in order coordinates, modulo l^M.
    pub idempotent: Vec<BigInt>,
    pivots: Vec<usize>,
    kinv: Mat<BigInt>,
}

impl DvrComponent {
    /// Image of an order element (integer coordinates) in the component.
    pub fn image(&self, order: &Order, x: &[BigInt]) -> RingElement {
        let y = order.mul_in(&self.base, &self.idempotent, x);
        let fc: Vec<BigInt> = self.pivots.iter().map(|&p| y[p].clone()).collect();
        self.ring.element(&mat::mul_vec(&self.base, &self.kinv, &fc))
    }

    /// Whether `y` (order coordinates, taken mod l) maps to 1 in the
    /// residue field of this component, i.e. `eps y = eps` mod l.
    pub fn is_one_mod_ell(&self, order: &Order, y: &[BigInt]) -> bool {
        let f = self.base.residue_field();
        let lhs = order.mul_in(&f, &self.idempotent, y);
        lhs.iter().zip(&self.idempotent).all(|(a, b)| f.is_zero(&f.sub(a, &f.reduce(b))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Z[x]/(g) for monic integer g, on the power basis.
    pub(crate) fn monogenic(g: &[i64]) -> Order {
        let n = g.len() - 1;
        let zz = Integers;
        let gp: Vec<BigInt> = g.iter().map(|&c| BigInt::from(c)).collect();
        let mut mult = vec![vec![Vec::new(); n]; n];
        for a in 0..n {
            for b in 0..n {
                let mono = crate::arith::poly::monomial(&zz, BigInt::one(), a + b);
                let mut r = crate::arith::poly::rem_monic(&zz, &mono, &gp);
                r.resize(n, BigInt::zero());
                mult[a][b] = r;
            }
        }
        Order::new(n, mult, unit_vector(n, 0)).unwrap()
    }

    #[test]
    fn gaussian_integers_are_maximal_at_3() {
        let o = monogenic(&[1, 0, 1]);
        let (m, t) = o.maximal_at(3).unwrap();
        assert_eq!(m, o);
        assert_eq!(t, mat::identity(&Rationals, 2));
    }

    #[test]
    fn non_maximal_order_is_enlarged() {
        // Z[sqrt(-3)] has index 2 in Z[(1 + sqrt(-3))/2].
        let o = monogenic(&[3, 0, 1]);
        let (m, t) = o.maximal_at(2).unwrap();
        let det = crate::linalg::mat::charpoly(&Rationals, &t)[0].clone();
        assert_eq!(det, BigRational::new(BigInt::one(), BigInt::from(2)));
        assert_eq!(m.maximal_at(2).unwrap().0, m);
        // Z[x]/(x^2 - 2^3 * 5) at 2: index 2 (sqrt(10) = x / 2).
        let o = monogenic(&[-40, 0, 1]);
        let (_, t) = o.maximal_at(2).unwrap();
        let det = crate::linalg::mat::charpoly(&Rationals, &t)[0].clone();
        assert_eq!(det, BigRational::new(BigInt::one(), BigInt::from(2)));
    }

    #[test]
    fn split_order_separates_residually_equal_roots() {
        // Z[x]/((x - 1)(x - 1 - 125)): maximal order Z x Z at 5.
        let o = monogenic(&[126, -127, 1]);
        let (m, _) = o.maximal_at(5).unwrap();
        let ring = PrimePower::new(5, 6).unwrap();
        let comps = m.components(&ring).unwrap();
        assert_eq!(comps.len(), 2);
        let (_, t) = o.maximal_at(5).unwrap();
        let inv = field::inverse(&Rationals, &t).unwrap();
        let x = integral(&vec_mat(&Rationals, &rational(&[BigInt::zero(), BigInt::one()]), &inv)).unwrap();
        let mut roots: Vec<BigInt> = comps
            .iter()
            .map(|c| {
                assert_eq!(c.ring.degree(), 1);
                c.image(&m, &x).as_base().unwrap()
            })
            .collect();
        roots.sort();
        assert_eq!(roots, vec![BigInt::from(1), BigInt::from(126)]);
    }

    #[test]
    fn ramified_and_unramified_components() {
        let ring = PrimePower::new(5, 4).unwrap();
        let o = monogenic(&[-5, 0, 1]);
        let comps = o.maximal_at(5).unwrap().0.components(&ring).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!((comps[0].ring.e(), comps[0].ring.f()), (2, 1));
        let o = monogenic(&[2, 0, 1]);
        let comps = o.maximal_at(5).unwrap().0.components(&ring).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!((comps[0].ring.e(), comps[0].ring.f()), (1, 2));
        // x in the ramified ring has valuation 1/2.
        let o = monogenic(&[-5, 0, 1]);
        let (m, t) = o.maximal_at(5).unwrap();
        assert_eq!(t, mat::identity(&Rationals, 2));
        let x = comps_image(&m, &ring, &[0, 1]);
        assert_eq!(x.valuation(), crate::arith::local_ring::Valuation::exact(1, 2));
    }

    fn comps_image(m: &Order, ring: &PrimePower, x: &[i64]) -> RingElement {
        let comps = m.components(ring).unwrap();
        let x: Vec<BigInt> = x.iter().map(|&c| BigInt::from(c)).collect();
        comps[0].image(m, &x)
    }
}
