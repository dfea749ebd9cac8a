use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),

    #[error("invalid name `{name}`: {reason}")]
    InvalidName { name: String, reason: String },

    #[error("jet order overflow: differentiating `{symbol}` by `{var}` needs order above {max}")]
    OrderOverflow { symbol: String, var: String, max: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not invertible on the sample domain")]
    NotInvertible,

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("Maurer-Cartan equation fails for the pair ({i}, {j})")]
    MaurerCartan { i: usize, j: usize },

    #[error("residual gauge symbol `{0}` after projection")]
    ResidualGauge(String),

    #[error("numeric domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
