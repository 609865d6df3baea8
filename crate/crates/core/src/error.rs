use thiserror::Error;

/// Errors raised by the library operations.
///
/// Every variant is a rejected input; no operation fails on well-formed input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("order must be at least 2, got {0}")]
    OrderTooSmall(u32),
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("zero has no Zeckendorf representation")]
    ZeroHasNoRepresentation,
    #[error("invalid Zeckendorf representation: {0}")]
    InvalidRepresentation(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("base must be greater than 1")]
    BaseTooSmall,
    #[error("{what} = {value} exceeds the cap of {cap}; {hint}")]
    AboveCap {
        what: &'static str,
        value: u64,
        cap: u64,
        hint: &'static str,
    },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("every sampled walk ended at zero; no estimate is possible")]
    AllWalksZero,
    #[error("morphism is not prolongable on letter {0}")]
    NotProlongable(u8),
    #[error("letter {letter} is outside the alphabet of size {alphabet}")]
    LetterOutOfAlphabet { letter: u8, alphabet: u8 },
    #[error("expected a binary word, got alphabet size {0}")]
    NotBinary(u8),
    #[error("closed forms disagree at n = {n}: {values:?}")]
    FormulaDisagreement { n: u64, values: Vec<u128> },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
