use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A problem with one line of an input file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, field `{field}`: {message}")]
pub struct RowError {
    /// 1-based line number in the file; the header is line 1.
    pub line: u64,
    pub field: String,
    pub message: String,
}

impl RowError {
    pub(crate) fn new(line: u64, field: &str, message: impl Into<String>) -> Self {
        Self {
            line,
            field: field.to_string(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Row {
        path: PathBuf,
        #[source]
        source: RowError,
    },

    #[error("{path}: {} malformed rows, first: {}", .errors.len(), .errors[0])]
    Rows { path: PathBuf, errors: Vec<RowError> },

    #[error("{path}: header must be `{expected}`, found `{found}`")]
    Header {
        path: PathBuf,
        expected: String,
        found: String,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("empty input")]
    EmptyInput,

    #[error("durations and event flags differ in length ({durations} vs {flags})")]
    LengthMismatch { durations: usize, flags: usize },

    #[error("duration at index {index} must be a positive finite number, got {value}")]
    InvalidDuration { index: usize, value: f64 },

    #[error("confidence must lie strictly between 0 and 1, got {0}")]
    InvalidConfidence(f64),

    #[error("variance must be a non-negative number, got {0}")]
    InvalidVariance(f64),

    #[error("chi-square statistic must be non-negative, got {0}")]
    NegativeStatistic(f64),

    #[error("estimate must lie in [0, 1], got {0}")]
    InvalidEstimate(f64),

    #[error("evaluation time must be a non-negative number, got {0}")]
    InvalidTime(f64),

    #[error("evaluation grid is empty")]
    EmptyGrid,

    #[error("pooled data contains no events")]
    NoEvents,

    #[error("no goal mode selected")]
    EmptySelection,

    #[error("infeasible fixture: {0}")]
    InfeasibleFixture(String),

    #[error("dataset has no games played")]
    NoGames,

    #[error("dataset `{player}` is invalid: {count} violation(s), first: {first}")]
    InvalidDataset {
        player: String,
        count: usize,
        first: String,
    },

    #[error("unknown goal mode `{0}`")]
    UnknownMode(String),
}
