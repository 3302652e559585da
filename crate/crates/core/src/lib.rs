//! Prime-rich quadratic polynomials built from Heegner numbers.
//!
//! The family `f(n) = n² − (2Zk − 1)·n + ((2Zk − 1)² + H)/4` is evaluated,
//! scanned for primes and analysed through Bateman-Horn constants. The same
//! structure drives a structured prime/key generator and a mirrored
//! channel-to-frequency allocator.

pub mod error;
pub mod polynomial;
pub mod primality;
pub mod density;
pub mod bateman_horn;
pub mod optimizer;
pub mod keygen;
pub mod channels;

mod decimal;

pub use error::{Error, Result};
pub use polynomial::{FamilyParams, HeegnerNumber, QuadraticPolynomial};
