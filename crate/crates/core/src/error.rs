use alloc::string::String;

use num_bigint::BigUint;

use crate::rational::PosRational;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("denominator must be positive")]
    ZeroDenominator,
    #[error("n(r) and d(r) are undefined at 0")]
    ZeroRational,
    #[error("{0} is not prime")]
    NotPrime(BigUint),
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("{0}")]
    Semantic(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0} is not an element of the monoid")]
    NotAMember(PosRational),
    #[error("resource cap of {limit} exceeded while {during}")]
    ResourceCap { limit: u64, during: &'static str },
    #[error("insufficient metadata: {0}")]
    InsufficientMetadata(&'static str),
    #[error("{0} has no stable/unstable splitting")]
    NotDecomposable(PosRational),
    #[error("unknown catalog entry {0:?}")]
    UnknownCatalog(String),
    #[error("integer overflow while {0}")]
    Overflow(&'static str),
    #[error("invariant violated: {0}")]
    Invariant(String),
}
