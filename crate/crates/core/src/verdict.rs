//! Outcome of checking an identification word against an expected message.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(Rejection),
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

/// Why a word was rejected. Every variant rejects; the split only
/// serves diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    TagMismatch,
    Malformed(Malformed),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Malformed {
    Empty,
    LengthMismatch {
        field: &'static str,
        expected: usize,
        actual: usize,
    },
    IndexOutOfRange {
        index: u32,
        n: u32,
    },
    FieldMismatch {
        expected: u8,
        actual: u8,
    },
    ParameterMismatch(&'static str),
}

impl fmt::Display for Malformed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Malformed::Empty => f.write_str("word carries no tags"),
            Malformed::LengthMismatch {
                field,
                expected,
                actual,
            } => {
                write!(f, "{field}: expected length {expected}, got {actual}")
            }
            Malformed::IndexOutOfRange { index, n } => {
                write!(f, "index {index} out of range for n = {n}")
            }
            Malformed::FieldMismatch { expected, actual } => {
                write!(f, "word over GF(2^{actual}), expected GF(2^{expected})")
            }
            Malformed::ParameterMismatch(what) => write!(f, "parameter mismatch: {what}"),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accept => f.write_str("ACCEPT"),
            Verdict::Reject(Rejection::TagMismatch) => f.write_str("REJECT (tag mismatch)"),
            Verdict::Reject(Rejection::Malformed(m)) => write!(f, "REJECT (malformed: {m})"),
        }
    }
}

pub(crate) fn malformed(m: Malformed) -> Verdict {
    Verdict::Reject(Rejection::Malformed(m))
}
