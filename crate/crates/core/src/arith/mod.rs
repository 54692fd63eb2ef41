pub mod hensel;
pub mod local_ring;
pub mod poly;
pub mod primes;
pub mod ring;

pub use local_ring::{quotient_exponent, LocalRing, RingElement, Valuation, ValuationKind};
pub use ring::{Field, Integers, PrimeField, PrimePower, Rationals, Ring};
