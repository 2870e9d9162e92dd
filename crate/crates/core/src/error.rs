use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested computation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two points of different dimensionality were compared.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// Input data could not be parsed. Each entry names the 1-based data row.
    #[error("invalid input: {}", format_rows(.0))]
    InvalidRows(Vec<RowError>),

    /// Structural problem with an input file (header, emptiness, encoding).
    #[error("invalid input: {0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// A single rejected row in a CSV input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    /// 1-based index of the data row (the header is not counted).
    pub row: usize,
    pub message: String,
}

fn format_rows(rows: &[RowError]) -> String {
    rows.iter().map(|r| format!("row {}: {}", r.row, r.message)).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
