use std::time::Duration;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic 2 is not supported (p must be an odd prime)")]
    EvenCharacteristic,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid ring spec: {0}")]
    InvalidSpec(String),

    #[error("ring is not local: {0}")]
    NotLocal(String),

    #[error("modulus is reducible modulo {p}")]
    ReducibleModulus { p: u64 },

    #[error("operands belong to different rings")]
    MixedRings,

    #[error("element is not a unit")]
    NotAUnit,

    #[error("{what} has size {size}, over the enumeration bound {bound}")]
    TooLarge { what: String, size: u128, bound: u64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("form is not symmetric")]
    NotSymmetric,

    #[error("form is degenerate (determinant is not a unit)")]
    Degenerate,

    #[error("form has the wrong discriminant class: {0}")]
    WrongClass(String),

    #[error("vector is not unimodular")]
    NotUnimodular,

    #[error("vectors are not pairwise orthogonal")]
    NotOrthogonal,

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("search exceeded its budget of {budget:?}")]
    Timeout { budget: Duration },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid literal {literal:?}: {message}")]
    Literal { literal: String, message: String },

    #[error("ring #{index} is invalid: {source}")]
    Validation {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn literal(literal: &str, message: impl Into<String>) -> Self {
        Error::Literal {
            literal: literal.to_owned(),
            message: message.into(),
        }
    }

    /// Innermost cause, looking through [`Error::Validation`] wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Validation { source, .. } => source.root(),
            other => other,
        }
    }
}
