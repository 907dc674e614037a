use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report. Variants map one-to-one onto the
/// CLI exit codes and the FFI status codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("size limit exceeded: {what} = {value} > {limit}")]
    SizeLimitExceeded {
        what: &'static str,
        value: u128,
        limit: u128,
    },

    #[error("operands belong to different fields")]
    FieldMismatch,

    #[error("operation requires odd characteristic")]
    EvenCharacteristic,

    #[error("division by zero")]
    DivisionByZero,

    #[error("the zero function has no poles")]
    ZeroFunction,

    #[error("pole order {e} is divisible by p = {p}")]
    PDividesE { e: u32, p: u32 },

    #[error("t must avoid 0 and 1")]
    BadT,

    #[error("invalid ramification data: {0}")]
    InvalidRamData(String),

    #[error("2g = {two_g} is not a multiple of p - 1 = {p_minus_1}")]
    GenusNotMultiple { two_g: u64, p_minus_1: u64 },

    #[error("splitting behavior {split} is not compatible with {ram}")]
    IncompatibleSplit { ram: String, split: String },

    #[error("no closed form for shape {0}; use the enumeration oracle")]
    UnsupportedShape(String),

    #[error("no closed form for genus {g} in characteristic {p}; use the enumeration oracle")]
    UnsupportedGenus { g: u64, p: u32 },

    #[error("u lies in AS(k(x)); the cover is not geometrically irreducible")]
    ReducibleCover,

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn size(what: &'static str, value: u128, limit: u128) -> Self {
        Error::SizeLimitExceeded { what, value, limit }
    }
}
