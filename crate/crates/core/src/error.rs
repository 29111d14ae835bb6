use thiserror::Error;

use crate::wire_net::WireError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("field mismatch: GF(2^{left}) vs GF(2^{right})")]
    FieldMismatch { left: u8, right: u8 },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("index {index} out of range for code length {n}")]
    IndexOutOfRange { index: u64, n: u64 },

    #[error("element {value} is not in GF(2^{m})")]
    ElementOutOfRange { value: u32, m: u8 },

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("LFSR attack needs mu < k (mu = {mu}, k = {k})")]
    AttackNotApplicable { mu: usize, k: usize },

    #[error("enumeration of {cases} cases exceeds the limit of {limit}")]
    EnumerationTooLarge { cases: u128, limit: u128 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error(transparent)]
    Wire(#[from] WireError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
