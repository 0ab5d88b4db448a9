//! Error type shared by every pipeline stage.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A CSV record had the wrong number of fields. Rows are 1-indexed over
    /// data records (the header is row 0).
    #[error("row {row}: expected {expected} fields, got {got}")]
    RaggedRow {
        row: usize,
        expected: usize,
        got: usize,
    },

    #[error("empty input: no header row")]
    EmptyInput,

    #[error("unknown column '{0}'")]
    UnknownColumn(String),

    #[error("column {0} has no observed values")]
    NoObservedValues(String),

    #[error("unknown class '{0}'")]
    UnknownClass(String),

    /// Malformed or contract-violating data (missing cells where density is
    /// required, empty datasets, class too small, width mismatches, ...).
    #[error("{0}")]
    InvalidData(String),

    /// A parameter outside its documented domain.
    #[error("{0}")]
    InvalidParam(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid_data(msg: impl Into<String>) -> Self {
        Error::InvalidData(msg.into())
    }

    pub fn invalid_param(msg: impl Into<String>) -> Self {
        Error::InvalidParam(msg.into())
    }
}
