//! Ring contexts used by the generic polynomial and matrix code.
//!
//! Elements are plain values (`BigInt`, `BigRational`); the context object
//! carries the modulus, so the same element type serves Z, Z/l^N and F_l.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::primes::is_prime;
use crate::error::{Error, Result};

pub trait Ring: Clone + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_bigint(&self, x: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn from_i64(&self, x: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(x))
    }

    /// `sum a_i b_i`.
    fn dot(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Self::Elem {
        let mut acc = self.zero();
        for (x, y) in a.iter().zip(b) {
            acc = self.add(&acc, &self.mul(x, y));
        }
        acc
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut exp: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }
}

/// The integers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_bigint(&self, x: &BigInt) -> BigInt {
        x.clone()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
}

/// The rationals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_bigint(&self, x: &BigInt) -> BigRational {
        BigRational::from_integer(x.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

impl Field for Rationals {
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
}

/// The ring Z/l^N with canonical representatives in `[0, l^N)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PrimePower {
    ell: u64,
    precision: u32,
    modulus: BigInt,
}

impl fmt::Debug for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}^{}", self.ell, self.precision)
    }
}

impl PrimePower {
    pub fn new(ell: u64, precision: u32) -> Result<Self> {
        if !is_prime(ell) {
            return Err(Error::NotPrime(ell));
        }
        if precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        Ok(Self::new_unchecked(ell, precision))
    }

    pub(crate) fn new_unchecked(ell: u64, precision: u32) -> Self {
        let modulus = num_traits::pow(BigInt::from(ell), precision as usize);
        PrimePower { ell, precision, modulus }
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn ell_big(&self) -> BigInt {
        BigInt::from(self.ell)
    }

    /// The same prime at another precision.
    pub fn with_precision(&self, precision: u32) -> PrimePower {
        PrimePower::new_unchecked(self.ell, precision.max(1))
    }

    pub fn residue_field(&self) -> PrimeField {
        PrimeField(self.with_precision(1))
    }

    pub fn reduce(&self, x: &BigInt) -> BigInt {
        if !x.is_negative() && *x < self.modulus {
            return x.clone();
        }
        x.mod_floor(&self.modulus)
    }

    /// l-adic valuation of a residue; zero reports the precision.
    pub fn valuation(&self, x: &BigInt) -> u32 {
        let mut r = self.reduce(x);
        if r.is_zero() {
            return self.precision;
        }
        let ell = self.ell_big();
        let mut v = 0;
        loop {
            let (q, rem) = r.div_rem(&ell);
            if !rem.is_zero() {
                return v;
            }
            r = q;
            v += 1;
        }
    }

    pub fn is_unit(&self, x: &BigInt) -> bool {
        !x.mod_floor(&self.ell_big()).is_zero()
    }

    /// Inverse of a unit.
    pub fn inv(&self, x: &BigInt) -> Option<BigInt> {
        let r = self.reduce(x);
        let g = r.extended_gcd(&self.modulus);
        if g.gcd.is_one() {
            Some(self.reduce(&g.x))
        } else {
            None
        }
    }

    /// Symmetric representative in `(-l^N/2, l^N/2]`.
    pub fn symmetric(&self, x: &BigInt) -> BigInt {
        let r = self.reduce(x);
        let half: BigInt = &self.modulus >> 1;
        if r > half {
            r - &self.modulus
        } else {
            r
        }
    }

    /// `l^k` as an integer.
    pub fn ell_pow(&self, k: u32) -> BigInt {
        num_traits::pow(self.ell_big(), k as usize)
    }
}

impl Ring for PrimePower {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        self.reduce(&BigInt::one())
    }
    fn from_bigint(&self, x: &BigInt) -> BigInt {
        self.reduce(x)
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let s = a + b;
        if s >= self.modulus {
            s - &self.modulus
        } else if s.is_negative() {
            self.reduce(&s)
        } else {
            s
        }
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let s = a - b;
        if s.is_negative() {
            let t = s + &self.modulus;
            if t.is_negative() {
                self.reduce(&t)
            } else {
                t
            }
        } else if s >= self.modulus {
            self.reduce(&s)
        } else {
            s
        }
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b).mod_floor(&self.modulus)
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        if a.is_zero() {
            BigInt::zero()
        } else {
            self.reduce(&(&self.modulus - a))
        }
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        if !a.is_negative() && *a < self.modulus {
            return a.is_zero();
        }
        self.reduce(a).is_zero()
    }
    /// One reduction for the whole sum.
    fn dot(&self, a: &[BigInt], b: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (x, y) in a.iter().zip(b) {
            if !x.is_zero() && !y.is_zero() {
                acc += x * y;
            }
        }
        self.reduce(&acc)
    }
}

/// The prime field F_l.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PrimeField(PrimePower);

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.ell)
    }
}

impl PrimeField {
    pub fn new(ell: u64) -> Result<Self> {
        Ok(PrimeField(PrimePower::new(ell, 1)?))
    }

    pub fn ell(&self) -> u64 {
        self.0.ell
    }

    pub fn as_prime_power(&self) -> &PrimePower {
        &self.0
    }

    pub fn reduce(&self, x: &BigInt) -> BigInt {
        self.0.reduce(x)
    }
}

impl Ring for PrimeField {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        self.0.zero()
    }
    fn one(&self) -> BigInt {
        self.0.one()
    }
    fn from_bigint(&self, x: &BigInt) -> BigInt {
        self.0.from_bigint(x)
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.0.add(a, b)
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.0.sub(a, b)
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.0.mul(a, b)
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        self.0.neg(a)
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        self.0.is_zero(a)
    }
    fn dot(&self, a: &[BigInt], b: &[BigInt]) -> BigInt {
        self.0.dot(a, b)
    }
}

impl Field for PrimeField {
    fn inv(&self, a: &BigInt) -> Option<BigInt> {
        self.0.inv(a)
    }
}
