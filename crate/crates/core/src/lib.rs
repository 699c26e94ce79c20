//! Higher Mertens constants for k-almost primes and the sieve data that
//! checks their asymptotics.

pub mod constants;
pub mod dd;
pub mod error;
pub mod partitions;
pub mod poly;
pub mod precision;
pub mod report;
pub mod semiprime;
pub mod sieve;
pub mod verify;

pub use error::{Error, Result};
pub use precision::{Precision, Real};
