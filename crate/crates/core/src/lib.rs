//! Exact decomposition of Hecke algebras into l-adic local factors,
//! congruence exponents between eigenforms, and a file-backed orbit store.

pub mod algebra;
pub mod cli;
pub mod congruence;
pub mod arith;
pub mod error;
pub mod factor;
pub mod hecke;
pub mod linalg;
pub mod store;

pub use error::{Error, Result};
