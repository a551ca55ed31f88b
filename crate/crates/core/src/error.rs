use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid subspace specification: {0}")]
    InvalidSpec(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("mismatched inputs: {0}")]
    Mismatch(String),

    /// The sequence has not reached its eventual form inside the computed range.
    #[error("{what}: sequence not stabilized by kmax = {k_max}; raise --kmax")]
    NotStabilized { what: String, k_max: i64 },

    #[error("{what}: tail of the sequence fits no quadratic of the form (k+a+1)(k+a+2)/2 - c")]
    NonPolynomial { what: String },

    #[error("{what}: fitted second Chern class is negative ({constant})")]
    NegativeChern { what: String, constant: i64 },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
