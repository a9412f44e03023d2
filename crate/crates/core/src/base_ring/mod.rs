//! Quadratic base ring arithmetic, primes, residue fields and truncated p-adic work.

mod field;
mod local;
mod prime;

pub use field::*;
pub use local::{LocalContext, ParamTag, TableParams};
pub use prime::{factor_prime, PrimeIdeal, ResidueField, Splitting};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BaseRingError {
    #[error("field Q(sqrt {0}) is not supported")]
    UnsupportedField(u64),
    #[error("ideal operations need narrow class number one, Q(sqrt {0}) fails")]
    NarrowClassNumber(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime 2 is only supported when inert")]
    UnsupportedPrime,
    #[error("division by zero")]
    DivisionByZero,
    #[error("euclidean division did not reduce the norm")]
    EuclidFailed,
    #[error("element is not integral at the prime")]
    NotIntegral,
    #[error("element is not a square at the working precision")]
    NotASquare,
    #[error("precision {0} too low")]
    PrecisionTooLow(u32),
    #[error("parameter {0} not available at this prime")]
    ParameterUnavailable(String),
}
