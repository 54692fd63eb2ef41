pub mod finite_field;
pub mod rational;
