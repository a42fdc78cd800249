use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime")]
    InvalidModulus(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("root-of-unity order {m} does not divide p - 1 = {order}")]
    OrderMismatch { m: u64, order: u64 },
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("operands live in different fields")]
    FieldMismatch,

    #[error("invalid scheme parameters: {0}")]
    InvalidParams(String),

    #[error("key generation gave up after {0} rejected secret matrices")]
    KeygenExhausted(usize),
    #[error("secret matrix rejected: invariant values are undefined or equal")]
    KeyRejected,
    #[error("message is empty")]
    EmptyMessage,
    #[error("invalid ciphertext block {block}: invariant value matches neither plaintext")]
    InvalidCiphertext { block: usize },
    #[error("ciphertext does not match key parameters: {0}")]
    ParamsMismatch(String),

    #[error("no degree-{0} invariant separates v0 from v1")]
    NoSeparatingInvariant(u32),
    #[error("polynomial recovery does not support the rational invariant")]
    RationalInvariantUnsupported,
    #[error("search space of {0} candidates exceeds the enumeration guard")]
    SearchSpaceTooLarge(u128),
    #[error("group order exceeds the cap of {0} elements")]
    GroupTooLarge(usize),
    #[error("group order {order} is divisible by the characteristic {p}")]
    OrderNotInvertible { order: usize, p: u64 },

    #[error("Jacobi symbol needs an odd modulus")]
    EvenModulus,
    #[error("invalid primes: {0}")]
    InvalidPrimes(String),
    #[error("ciphertext is not a unit modulo n")]
    NotAUnit,

    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
