//! Finite quotients O/l^N of the valuation ring of a finite extension of
//! Q_l, presented as Z/l^N[x]/(g) for a single monic g.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};

use super::poly::{self, Poly};
use super::ring::{PrimePower, Ring};
use crate::error::{Error, Result};
use crate::factor::finite_field;
use crate::linalg::{modular, Mat};

/// `w = e(m-1)+1`: the l-adic precision in lambda-units that makes
/// O/lambda^w an extension of Z/l^m.
pub fn quotient_exponent(e: u32, m: u32) -> u32 {
    e * (m - 1) + 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ValuationKind {
    Exact,
    AtLeast,
}

/// A valuation measured in lambda-units together with the ramification index
/// needed to normalise it (v(l) = 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Valuation {
    pub kind: ValuationKind,
    pub lambda: u64,
    pub e: u32,
}

impl Valuation {
    pub fn exact(lambda: u64, e: u32) -> Self {
        Valuation { kind: ValuationKind::Exact, lambda, e }
    }

    pub fn at_least(lambda: u64, e: u32) -> Self {
        Valuation { kind: ValuationKind::AtLeast, lambda, e }
    }

    pub fn is_exact(&self) -> bool {
        self.kind == ValuationKind::Exact
    }

    /// Value with v(l) = 1.
    pub fn normalised(&self) -> Ratio<u64> {
        Ratio::new(self.lambda, self.e as u64)
    }

    /// Minimum, where an at-least value only wins if strictly smaller
    /// normalised values are absent.
    pub fn min(self, other: Valuation) -> Valuation {
        let (a, b) = (self.normalised(), other.normalised());
        match a.cmp(&b) {
            std::cmp::Ordering::Less => self,
            std::cmp::Ordering::Greater => other,
            std::cmp::Ordering::Equal => {
                if self.is_exact() {
                    self
                } else {
                    other
                }
            }
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.normalised();
        let prefix = if self.is_exact() { "" } else { ">=" };
        if *n.denom() == 1 {
            write!(f, "{prefix}{}", n.numer())
        } else {
            write!(f, "{prefix}{}/{}", n.numer(), n.denom())
        }
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct LocalRingData {
    base: PrimePower,
    poly: Poly<BigInt>,
    e: u32,
    f: u32,
    residue_poly: Poly<BigInt>,
    uniformizer: Vec<BigInt>,
}

/// The ring Z/l^N[x]/(g) with ramification index `e` and residue degree `f`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LocalRing(Arc<LocalRingData>);

impl fmt::Debug for LocalRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalRing(l={}, N={}, e={}, f={}, g={:?})", self.ell(), self.precision(), self.0.e, self.0.f, self.0.poly)
    }
}

impl LocalRing {
    /// Validate and build. `g` is given by integer coefficients, lowest first.
    pub fn new(ell: u64, precision: u32, g: &[BigInt], e: u32) -> Result<Self> {
        let base = PrimePower::new(ell, precision)?;
        let g = poly::trim(&base, g.iter().map(|c| base.reduce(c)).collect());
        if !poly::is_monic(&base, &g) {
            return Err(Error::NonMonic);
        }
        let deg = g.len() - 1;
        if deg == 0 {
            return Err(Error::InconsistentSplit("defining polynomial has degree 0".into()));
        }
        if e == 0 || deg % e as usize != 0 {
            return Err(Error::InconsistentSplit(format!("e = {e} does not divide degree {deg}")));
        }
        let f = (deg / e as usize) as u32;
        let fl = base.residue_field();
        let gbar: Poly<BigInt> = g.iter().map(|c| fl.reduce(c)).collect();
        let fac = finite_field::factor(&fl, &gbar);
        if fac.len() != 1 || fac[0].1 != e || fac[0].0.len() - 1 != f as usize {
            let shape: Vec<String> = fac.iter().map(|(q, m)| format!("deg {}^{}", q.len() - 1, m)).collect();
            return Err(Error::InconsistentSplit(format!(
                "reduction mod {ell} factors as [{}], expected one irreducible of degree {f} to the power {e}",
                shape.join(", ")
            )));
        }
        let phi = fac[0].0.clone();
        if e >= 2 && precision >= 2 {
            // Dedekind: Z_l[x]/(g) is a DVR iff phi does not divide (g - phi^e)/l mod l.
            let zz = crate::arith::ring::Integers;
            let phi_e = poly::pow(&zz, &phi, e as u64);
            let diff = poly::sub(&zz, &g, &phi_e);
            let ellb = BigInt::from(ell);
            let quotient: Poly<BigInt> = diff
                .iter()
                .map(|c| {
                    let c = base.reduce(c);
                    fl.reduce(&(c / &ellb))
                })
                .collect();
            let quotient = poly::trim(&fl, quotient);
            let rem = poly::rem_monic(&fl, &quotient, &phi);
            if rem.is_empty() {
                return Err(Error::InconsistentSplit(
                    "defining polynomial fails the Dedekind criterion; the quotient is not a valuation ring".into(),
                ));
            }
        }
        let mut uniformizer = vec![BigInt::zero(); deg];
        if e == 1 {
            uniformizer[0] = base.reduce(&BigInt::from(ell));
        } else {
            for (i, c) in phi.iter().enumerate() {
                uniformizer[i] = c.clone();
            }
        }
        Ok(LocalRing(Arc::new(LocalRingData { base, poly: g, e, f, residue_poly: phi, uniformizer })))
    }

    /// Z/l^N itself, presented by `x - 0`.
    pub fn base_ring(ell: u64, precision: u32) -> Result<Self> {
        LocalRing::new(ell, precision, &[BigInt::zero(), BigInt::one()], 1)
    }

    pub fn base(&self) -> &PrimePower {
        &self.0.base
    }

    pub fn ell(&self) -> u64 {
        self.0.base.ell()
    }

    pub fn precision(&self) -> u32 {
        self.0.base.precision()
    }

    pub fn defining_poly(&self) -> &[BigInt] {
        &self.0.poly
    }

    /// The irreducible phi with g = phi^e mod l.
    pub fn residue_poly(&self) -> &[BigInt] {
        &self.0.residue_poly
    }

    pub fn e(&self) -> u32 {
        self.0.e
    }

    pub fn f(&self) -> u32 {
        self.0.f
    }

    pub fn degree(&self) -> usize {
        self.0.poly.len() - 1
    }

    /// Precision in lambda-units, `e N`.
    pub fn lambda_precision(&self) -> u64 {
        self.0.e as u64 * self.precision() as u64
    }

    pub fn uniformizer(&self) -> RingElement {
        RingElement { ring: self.clone(), coords: self.0.uniformizer.clone() }
    }

    pub fn element(&self, coords: &[BigInt]) -> RingElement {
        let d = self.degree();
        let mut c: Vec<BigInt> = coords.iter().map(|x| self.0.base.reduce(x)).collect();
        if c.len() > d {
            let p = poly::rem_monic(&self.0.base, &c, &self.0.poly);
            c = p;
        }
        c.resize(d, BigInt::zero());
        RingElement { ring: self.clone(), coords: c }
    }

    pub fn from_int(&self, x: &BigInt) -> RingElement {
        self.element(std::slice::from_ref(x))
    }

    pub fn from_i64(&self, x: i64) -> RingElement {
        self.from_int(&BigInt::from(x))
    }

    /// The generator x of the presentation.
    pub fn generator(&self) -> RingElement {
        self.element(&[BigInt::zero(), BigInt::one()])
    }

    /// Same presentation at another precision (coefficients of g reduced or
    /// reinterpreted; raising precision is only meaningful for exact lifts).
    pub fn with_precision(&self, precision: u32) -> Result<LocalRing> {
        LocalRing::new(self.ell(), precision, &self.0.poly, self.0.e)
    }

    /// Matrix of multiplication by an element in the power basis.
    pub fn mult_matrix(&self, x: &RingElement) -> Mat<BigInt> {
        let d = self.degree();
        let mut cols = Vec::with_capacity(d);
        let mut cur = x.clone();
        let gen = self.generator();
        for _ in 0..d {
            cols.push(cur.coords.clone());
            cur = cur.mul(&gen);
        }
        Mat::from_cols(&cols)
    }

    /// Stable short hash of (l, N, e, g): first 16 hex digits of SHA-256.
    pub fn poly_hash(&self) -> String {
        poly_hash(self.ell(), self.precision(), self.e(), &self.0.poly)
    }
}

pub fn poly_hash(ell: u64, precision: u32, e: u32, g: &[BigInt]) -> String {
    use sha2::{Digest, Sha256};
    let coeffs: Vec<String> = g.iter().map(|c| c.to_string()).collect();
    let text = format!("{ell};{precision};{e};{}", coeffs.join(","));
    let digest = Sha256::digest(text.as_bytes());
    hex::encode(&digest[..8])
}

/// An element of a [`LocalRing`], stored by power-basis coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    ring: LocalRing,
    coords: Vec<BigInt>,
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>())
    }
}

impl RingElement {
    pub fn ring(&self) -> &LocalRing {
        &self.ring
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    fn check(&self, other: &RingElement) {
        assert!(
            Arc::ptr_eq(&self.ring.0, &other.ring.0) || self.ring == other.ring,
            "ring elements from different rings"
        );
    }

    pub fn add(&self, other: &RingElement) -> RingElement {
        self.check(other);
        let b = self.ring.base();
        let coords = self.coords.iter().zip(&other.coords).map(|(x, y)| b.add(x, y)).collect();
        RingElement { ring: self.ring.clone(), coords }
    }

    pub fn sub(&self, other: &RingElement) -> RingElement {
        self.check(other);
        let b = self.ring.base();
        let coords = self.coords.iter().zip(&other.coords).map(|(x, y)| b.sub(x, y)).collect();
        RingElement { ring: self.ring.clone(), coords }
    }

    pub fn neg(&self) -> RingElement {
        let b = self.ring.base();
        RingElement { ring: self.ring.clone(), coords: self.coords.iter().map(|x| b.neg(x)).collect() }
    }

    pub fn mul(&self, other: &RingElement) -> RingElement {
        self.check(other);
        let b = self.ring.base();
        let prod = poly::mul(b, &poly::trim(b, self.coords.clone()), &poly::trim(b, other.coords.clone()));
        self.ring.element(&poly::rem_monic(b, &prod, self.ring.defining_poly()))
    }

    pub fn scale(&self, c: &BigInt) -> RingElement {
        let b = self.ring.base();
        RingElement { ring: self.ring.clone(), coords: self.coords.iter().map(|x| b.mul(x, c)).collect() }
    }

    pub fn pow(&self, mut k: u64) -> RingElement {
        let mut acc = self.ring.from_i64(1);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_unit(&self) -> bool {
        self.valuation().lambda == 0 && self.valuation().is_exact()
    }

    /// Valuation in lambda-units. Zero at precision is reported as at-least
    /// `eN`; otherwise the value is exact and below `eN`.
    pub fn valuation(&self) -> Valuation {
        let r = &self.ring;
        let e = r.e();
        if self.is_zero() {
            return Valuation::at_least(r.lambda_precision(), e);
        }
        let b = r.base();
        if e == 1 {
            // Power basis of an unramified ring is an l-adic basis.
            let v = self.coords.iter().filter(|c| !c.is_zero()).map(|c| b.valuation(c)).min().unwrap();
            return Valuation::exact(v as u64, 1);
        }
        // O/xO has l-length f * v(x), read off from the elementary divisors.
        let s: u64 = modular::smith_exponents(b, &r.mult_matrix(self)).iter().map(|&x| x as u64).sum();
        Valuation::exact(s / r.f() as u64, e)
    }

    /// Inverse of a unit.
    pub fn inverse(&self) -> Option<RingElement> {
        let m = self.ring.mult_matrix(self);
        let inv = modular::unit_inverse(self.ring.base(), &m)?;
        Some(self.ring.element(&inv.col(0)))
    }

    /// Reduction to an integer when the element lies in Z/l^N.
    pub fn as_base(&self) -> Option<BigInt> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    /// Move into a ring with the same defining polynomial at lower precision.
    pub fn reduce_to(&self, ring: &LocalRing) -> RingElement {
        ring.element(&self.coords)
    }
}

/// Ring context so the generic polynomial helpers work over a local ring.
impl Ring for LocalRing {
    type Elem = RingElement;

    fn zero(&self) -> RingElement {
        self.from_i64(0)
    }
    fn one(&self) -> RingElement {
        self.from_i64(1)
    }
    fn from_bigint(&self, x: &BigInt) -> RingElement {
        self.from_int(x)
    }
    fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        a.add(b)
    }
    fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        a.sub(b)
    }
    fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        a.mul(b)
    }
    fn neg(&self, a: &RingElement) -> RingElement {
        a.neg()
    }
    fn is_zero(&self, a: &RingElement) -> bool {
        a.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(ell: u64, n: u32, g: &[i64], e: u32) -> Result<LocalRing> {
        let g: Vec<BigInt> = g.iter().map(|&c| BigInt::from(c)).collect();
        LocalRing::new(ell, n, &g, e)
    }

    #[test]
    fn construction_examples() {
        let z125 = ring(5, 3, &[0, 1], 1).unwrap();
        assert_eq!(z125.degree(), 1);
        assert!(matches!(ring(5, 3, &[-6, 0, 1], 1), Err(Error::InconsistentSplit(_))));
        let ram = ring(5, 3, &[-5, 0, 1], 2).unwrap();
        assert_eq!((ram.e(), ram.f()), (2, 1));
        assert_eq!(ram.uniformizer().valuation(), Valuation::exact(1, 2));
        assert!(matches!(ring(6, 3, &[0, 1], 1), Err(Error::NotPrime(6))));
        assert!(matches!(ring(5, 3, &[0, 2], 1), Err(Error::NonMonic)));
        // x^2 - 25 is (x-5)(x+5): reduction x^2 but not a valuation ring.
        assert!(matches!(ring(5, 3, &[-25, 0, 1], 2), Err(Error::InconsistentSplit(_))));
    }

    #[test]
    fn valuation_examples() {
        let z125 = ring(5, 3, &[0, 1], 1).unwrap();
        assert_eq!(z125.from_i64(5).valuation(), Valuation::exact(1, 1));
        assert_eq!(z125.from_i64(0).valuation(), Valuation::at_least(3, 1));
        let ram = ring(5, 3, &[-5, 0, 1], 2).unwrap();
        assert_eq!(ram.generator().valuation().normalised(), Ratio::new(1, 2));
        assert_eq!(ram.from_i64(5).valuation(), Valuation::exact(2, 2));
        assert_eq!(ram.from_i64(0).valuation(), Valuation::at_least(6, 2));
    }

    #[test]
    fn quotient_exponent_examples() {
        assert_eq!(quotient_exponent(2, 3), 5);
        assert_eq!(quotient_exponent(3, 1), 1);
        for e in 1..=10 {
            for m in 1..=10 {
                assert_eq!(quotient_exponent(1, m), m);
                assert_eq!(quotient_exponent(e, 1), 1);
            }
        }
    }

    fn rings() -> Vec<LocalRing> {
        vec![
            ring(5, 3, &[0, 1], 1).unwrap(),
            ring(5, 3, &[-5, 0, 1], 2).unwrap(),
            ring(3, 3, &[1, 0, 1], 1).unwrap(),
            ring(2, 4, &[2, 2, 1], 2).unwrap(),
            ring(3, 2, &[3, 0, 0, 1], 3).unwrap(),
        ]
    }

    proptest! {
        #[test]
        fn ring_axioms_and_valuation_laws(idx in 0usize..5, a in prop::collection::vec(-300i64..300, 3),
                                          b in prop::collection::vec(-300i64..300, 3),
                                          c in prop::collection::vec(-300i64..300, 3)) {
            let r = &rings()[idx];
            let el = |v: &[i64]| {
                let cs: Vec<BigInt> = v.iter().take(r.degree()).map(|&x| BigInt::from(x)).collect();
                r.element(&cs)
            };
            let (x, y, z) = (el(&a), el(&b), el(&c));
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
            prop_assert_eq!(r.from_i64(1).mul(&x), x.clone());
            let (vx, vy) = (x.valuation(), y.valuation());
            let n = r.lambda_precision();
            if vx.is_exact() && vy.is_exact() {
                let s = x.add(&y).valuation();
                prop_assert!(s.lambda >= vx.lambda.min(vy.lambda));
                if vx.lambda != vy.lambda {
                    prop_assert_eq!(s.lambda, vx.lambda.min(vy.lambda));
                }
                if vx.lambda + vy.lambda < n {
                    prop_assert_eq!(x.mul(&y).valuation(), Valuation::exact(vx.lambda + vy.lambda, r.e()));
                }
            }
        }
    }
}
