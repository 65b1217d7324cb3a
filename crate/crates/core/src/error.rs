use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on the requested operation does not hold.
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// The input object violates the contract of the operation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A counting identity the construction relies on failed; this is a bug,
    /// not a property of the input.
    #[error("internal error: {0}")]
    Internal(String),

    /// A detachment split stayed infeasible after exhausting all restarts.
    #[error("search exhausted at split {split_index} after {restarts} restarts")]
    SearchExhausted { split_index: usize, restarts: u32 },

    /// A malformed line in an .hf file.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A well-formed .hf file whose content is out of range.
    #[error("validation error: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
