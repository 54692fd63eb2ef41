pub mod field;
pub mod integer;
pub mod mat;
pub mod modular;

pub use mat::Mat;
