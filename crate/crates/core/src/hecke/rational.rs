//! Decomposition of the Hecke algebra over Q.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::space::HeckeSpace;
use crate::algebra::MatrixOrder;
use crate::arith::poly;
use crate::arith::ring::{Integers, Rationals};
use crate::error::{Error, Result};
use crate::factor::{finite_field, rational};
use crate::linalg::mat::{self, Mat};
use crate::linalg::field;

/// One factor of T (x) Q: a generalised eigenspace on which the reduced
/// algebra is the number field Q[x]/(field_poly).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalOrbit {
    pub rank: usize,
    /// Irreducible polynomial of a primitive element on this factor.
    pub field_poly: Vec<BigInt>,
    /// Column basis of the generalised eigenspace, in coordinates of a Z-basis of T.
    pub basis: Mat<BigRational>,
}

/// Split T (x) Q by a primitive element of its reduced algebra, acting on
/// T itself. Ranks sum to the rank of T; the order follows the field
/// polynomials.
pub fn rational_orbits(space: &HeckeSpace) -> Result<Vec<RationalOrbit>> {
    let q = Rationals;
    let alg = space.regular_algebra()?;
    let d = alg.dim();
    let reduced_dim = MatrixOrder::new(&alg)?.order.dim();
    let gens: Vec<&Mat<BigInt>> = alg.generators().iter().filter(|(l, _)| *l != 1).map(|(_, m)| m).collect();
    let (x, minpoly) = primitive_element(d, &gens, reduced_dim)?;
    let xq = x.map(|v| BigRational::from_integer(v.clone()));
    let mut out = Vec::new();
    for (phi, m) in rational::factor(&minpoly) {
        let phiq: Vec<BigRational> = phi.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let p = poly::pow(&q, &phiq, m as u64);
        let ker = field::kernel(&q, &mat::eval_poly(&q, &p, &xq));
        out.push(RationalOrbit { rank: ker.len(), field_poly: phi, basis: Mat::from_cols(&ker) });
    }
    out.sort_by(|a, b| finite_field::canonical_cmp(&a.field_poly, &b.field_poly));
    if out.iter().map(|o| o.rank).sum::<usize>() != d {
        return Err(Error::internal("rational orbit ranks do not sum to the rank of T"));
    }
    Ok(out)
}

/// An integer combination of the generators whose minimal polynomial has a
/// squarefree part of degree `reduced_dim`, i.e. which generates the
/// reduced algebra. Tries single generators first, then `sum c^i g_i`.
fn primitive_element(d: usize, gens: &[&Mat<BigInt>], reduced_dim: usize) -> Result<(Mat<BigInt>, Vec<BigInt>)> {
    let zz = Integers;
    let check = |x: &Mat<BigInt>| -> Option<Vec<BigInt>> {
        let xq = x.map(|v| BigRational::from_integer(v.clone()));
        let mp: Vec<BigInt> = mat::minpoly(&Rationals, &xq).iter().map(|c| c.to_integer()).collect();
        let rad: usize = rational::squarefree(&mp).iter().map(|(p, _)| p.len() - 1).sum();
        (rad == reduced_dim).then_some(mp)
    };
    if gens.is_empty() || reduced_dim == 1 {
        let id = mat::identity(&zz, d);
        let mp = check(&id).ok_or_else(|| Error::internal("identity is not primitive"))?;
        return Ok((id, mp));
    }
    for g in gens {
        if let Some(mp) = check(g) {
            return Ok(((*g).clone(), mp));
        }
    }
    for c in 2..10_000i64 {
        let mut x = mat::zeros(&zz, d, d);
        let mut ci = BigInt::from(1);
        for g in gens {
            x = mat::add(&zz, &x, &mat::scale(&zz, g, &ci));
            ci *= c;
        }
        if let Some(mp) = check(&x) {
            return Ok((x, mp));
        }
    }
    Err(Error::internal("no primitive element found"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn space(gens: Vec<Vec<Vec<i64>>>) -> HeckeSpace {
        let d = gens[0].len();
        let mut ms = vec![mat::identity(&Integers, d)];
        ms.extend(gens.iter().map(|g| mat::from_i64(&Integers, g)));
        HeckeSpace::new(1, 2, d, ms, None, BTreeMap::new()).unwrap()
    }

    #[test]
    fn one_dimensional() {
        let s = space(vec![vec![vec![-2]]]);
        let o = rational_orbits(&s).unwrap();
        assert_eq!(o.len(), 1);
        assert_eq!(o[0].rank, 1);
    }

    #[test]
    fn two_blocks_and_an_irreducible_quadratic() {
        // diag(companion(x^2 - 2), companion(x^2 - 3))
        let s = space(vec![vec![vec![0, 2, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 0, 3], vec![0, 0, 1, 0]]]);
        let o = rational_orbits(&s).unwrap();
        assert_eq!(o.iter().map(|x| x.rank).collect::<Vec<_>>(), vec![2, 2]);
        let s = space(vec![vec![vec![0, 2], vec![1, 0]]]);
        let o = rational_orbits(&s).unwrap();
        assert_eq!(o.len(), 1);
        assert_eq!(o[0].rank, 2);
        assert_eq!(o[0].field_poly, vec![BigInt::from(-2), BigInt::from(0), BigInt::from(1)]);
    }

    #[test]
    fn tensor_of_two_fields_needs_a_combination() {
        // i (x) 1 and 1 (x) i on Q(i) (x) Q(i) = Q(i) x Q(i): each generator
        // alone has minimal polynomial x^2 + 1.
        let j = [[0i64, -1], [1, 0]];
        let id = [[1i64, 0], [0, 1]];
        let kron = |a: &[[i64; 2]; 2], b: &[[i64; 2]; 2]| {
            let mut out = vec![vec![0; 4]; 4];
            for i in 0..2 {
                for jj in 0..2 {
                    for k in 0..2 {
                        for l in 0..2 {
                            out[2 * i + k][2 * jj + l] = a[i][jj] * b[k][l];
                        }
                    }
                }
            }
            out
        };
        let s = space(vec![kron(&j, &id), kron(&id, &j)]);
        let o = rational_orbits(&s).unwrap();
        assert_eq!(o.iter().map(|x| x.rank).collect::<Vec<_>>(), vec![2, 2]);
    }
}
