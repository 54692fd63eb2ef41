//! Hecke algebras given by ingested integer matrices: rational orbits,
//! l-adic local factors with echelonised dual bases, and l-adic eigenforms.

pub mod eigenform;
pub mod ell_adic;
pub mod hmat;
pub mod level11;
pub mod rational;
pub mod space;
pub mod sturm;

pub use eigenform::{eigenform_coefficients, qell_orbits, DEFAULT_PRECISION_CAP, PadicEigenform, QlContext, QlOrbits, UnresolvedBlock};
pub use ell_adic::{dual_basis, ell_adic_orbits, EllAdicOrbit};
pub use rational::{rational_orbits, RationalOrbit};
pub use space::HeckeSpace;
pub use sturm::sturm_bound;
