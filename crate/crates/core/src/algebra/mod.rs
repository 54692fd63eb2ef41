pub mod commuting;
pub mod decompose;
pub mod lift;
pub mod local_factor;
pub mod order;
pub mod reduced;

pub use commuting::{Coefficients, CommutingMatrixAlgebra};
pub use decompose::{decompose_mod_ell, IdempotentSet};
pub use lift::{lift_idempotent, LiftedIdempotent};
pub use local_factor::{basis_indices, local_factors, LocalFactor};
pub use order::{DvrComponent, Order};
pub use reduced::{regular_algebra, MatrixOrder};
