//! Newton iteration for simple roots, driven by a Bezout certificate
//! `1 = a f + b f'` so no division is needed.

use super::local_ring::{LocalRing, RingElement};
use super::poly::{self, Poly};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct HenselLift {
    pub root: RingElement,
    /// Lambda-adic valuation of f at each iterate, starting with the input.
    pub valuations: Vec<u64>,
}

/// Lift an approximate root `a0` of `f` to a root at full precision.
pub fn hensel_lift_root(
    ring: &LocalRing,
    f: &[RingElement],
    a0: &RingElement,
    cert: (&[RingElement], &[RingElement]),
) -> Result<HenselLift> {
    let df = poly::derivative(ring, f);
    let (a, b) = cert;
    let lhs = poly::add(ring, &poly::mul(ring, a, f), &poly::mul(ring, b, &df));
    let one: Poly<RingElement> = vec![ring.from_i64(1)];
    if poly::trim(ring, lhs) != one {
        return Err(Error::InvalidCertificate);
    }
    let full = ring.lambda_precision();
    let mut x = a0.clone();
    let mut fx = poly::eval(ring, f, &x);
    let v0 = fx.valuation();
    if v0.lambda == 0 {
        return Err(Error::NoApproximateRoot);
    }
    let r = v0.lambda;
    let mut valuations = vec![v0.lambda];
    // Quadratic convergence: after n steps v(f(a_n)) >= r 2^n.
    let max_steps = ceil_log2(full.div_ceil(r)) + 1;
    let mut steps = 0;
    while !fx.is_zero() {
        if steps >= max_steps {
            return Err(Error::internal(format!(
                "Newton iteration did not converge in {max_steps} steps (valuations {valuations:?})"
            )));
        }
        x = x.sub(&fx.mul(&poly::eval(ring, b, &x)));
        fx = poly::eval(ring, f, &x);
        valuations.push(fx.valuation().lambda);
        steps += 1;
    }
    Ok(HenselLift { root: x, valuations })
}

pub(crate) fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn base(ell: u64, n: u32) -> LocalRing {
        LocalRing::base_ring(ell, n).unwrap()
    }

    fn p(r: &LocalRing, c: &[i64]) -> Vec<RingElement> {
        c.iter().map(|&x| r.from_i64(x)).collect()
    }

    #[test]
    fn square_root_of_6_mod_5_6() {
        let r = base(5, 6);
        let f = p(&r, &[-6, 0, 1]);
        // Over Z_5, f' = 2x and f = x^2 - 6: 1 = a f + b f' with constant a and
        // linear b requires a = -1/6 and b = x/12 (since x^2 = f + 6).
        let inv6 = r.from_i64(6).inverse().unwrap();
        let inv12 = r.from_i64(12).inverse().unwrap();
        let a = vec![inv6.neg()];
        let b = vec![r.from_i64(0), inv12];
        let lift = hensel_lift_root(&r, &f, &r.from_i64(1), (&a, &b)).unwrap();
        let root = lift.root.as_base().unwrap();
        // Oracle: exhaustive search over Z/5^6.
        let m = 15625i64;
        let sols: Vec<i64> = (0..m).filter(|x| (x * x - 6).rem_euclid(m) == 0).collect();
        assert!(sols.contains(&i64::try_from(root.clone()).unwrap()));
        assert_eq!(root.clone() % BigInt::from(5), BigInt::from(1));
        for (n, v) in lift.valuations.iter().enumerate() {
            assert!(*v >= (lift.valuations[0] << n).min(6));
        }
    }

    #[test]
    fn linear_and_exact_roots() {
        let r = base(7, 4);
        let f = p(&r, &[-10, 1]);
        let cert_a: Vec<RingElement> = vec![];
        let cert_b = p(&r, &[1]);
        let lift = hensel_lift_root(&r, &f, &r.from_i64(10), (&cert_a, &cert_b)).unwrap();
        assert_eq!(lift.root, r.from_i64(10));
        // x^2 - x: 1 = -4 f + (2x - 1)(2x - 1) ... (2x-1)^2 = 4x^2 - 4x + 1.
        let f = p(&r, &[0, -1, 1]);
        let a = p(&r, &[-4]);
        let b = p(&r, &[-1, 2]);
        let lift = hensel_lift_root(&r, &f, &r.from_i64(0), (&a, &b)).unwrap();
        assert!(lift.root.is_zero());
        assert!(lift.valuations.len() == 1);
    }

    #[test]
    fn rejects_bad_certificate() {
        let r = base(5, 3);
        let f = p(&r, &[-6, 0, 1]);
        let a = p(&r, &[1]);
        let b = p(&r, &[1]);
        assert!(matches!(hensel_lift_root(&r, &f, &r.from_i64(1), (&a, &b)), Err(Error::InvalidCertificate)));
    }
}
