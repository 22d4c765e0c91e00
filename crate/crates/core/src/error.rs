use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain is empty: lo = {lo}, hi = {hi} (need hi > lo)")]
    DomainEmpty { lo: f64, hi: f64 },

    #[error("grid resolution too coarse: {intervals} intervals (need at least {min})")]
    Resolution { intervals: usize, min: usize },

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("insufficient data: {count} value(s), need at least {min}")]
    InsufficientData { count: usize, min: usize },

    #[error("non-finite value {value} at position {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("{} value(s) outside [{lo}, {hi}]: {}", .values.len(), format_values(.values))]
    OutOfDomain { lo: f64, hi: f64, values: Vec<f64> },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("zero mass: integral {0:e} is not positive")]
    ZeroMass(f64),

    #[error("singular tridiagonal system: zero pivot at row {0}")]
    SingularSystem(usize),

    #[error("negative density {value:e} at node {index} exceeds round-off tolerance")]
    NegativeDensity { index: usize, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{path}: dataset is empty")]
    EmptyDataset { path: PathBuf },

    #[error("no records left: {0}")]
    EmptyResult(String),

    #[error("empty intersection: model and field share no grid cells")]
    EmptyIntersection,

    #[error("duplicate grid cell {0:?}; average by decade first")]
    DuplicateCell(String),
}

fn format_values(values: &[f64]) -> String {
    const SHOWN: usize = 8;
    let mut out = values
        .iter()
        .take(SHOWN)
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    if values.len() > SHOWN {
        out.push_str(", ...");
    }
    out
}

impl Error {
    /// Short hyphenated identifier for status columns and log lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DomainEmpty { .. } => "domain-empty",
            Error::Resolution { .. } => "resolution",
            Error::DegenerateData(_) => "degenerate-data",
            Error::InsufficientData { .. } => "insufficient-data",
            Error::NonFinite { .. } => "non-finite",
            Error::OutOfDomain { .. } => "out-of-domain",
            Error::GridMismatch(_) => "grid-mismatch",
            Error::ZeroMass(_) => "zero-mass",
            Error::SingularSystem(_) => "singular-system",
            Error::NegativeDensity { .. } => "negative-density",
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::Io { .. } => "io",
            Error::Parse { .. } => "parse",
            Error::EmptyDataset { .. } => "empty-dataset",
            Error::EmptyResult(_) => "empty-result",
            Error::EmptyIntersection => "empty-intersection",
            Error::DuplicateCell(_) => "duplicate-cell",
        }
    }

    /// Errors caused by how the tool was invoked rather than by the data.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::DomainEmpty { .. } | Error::Resolution { .. } | Error::InvalidParameter(_)
        )
    }
}
