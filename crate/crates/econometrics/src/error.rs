use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = EconError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum EconError {
    #[error("the panel has no observations")]
    EmptyPanel,
    #[error("{column} is {value} for {country} {year}, outside [0, 1]")]
    ShareOutOfRange {
        column: &'static str,
        country: String,
        year: u32,
        value: f64,
    },
    #[error("{column} shares for {year} sum to {sum}, not 1 within {tolerance}")]
    YearSum {
        column: &'static str,
        year: u32,
        sum: f64,
        tolerance: f64,
    },
    #[error("duplicate observation {country} {year}")]
    Duplicate { country: String, year: u32 },
    #[error("column {0} is zero for every observation")]
    ZeroColumn(String),
    #[error("design matrix is rank deficient: column {0} is a combination of earlier columns")]
    RankDeficient(String),
    #[error("dependent variable {value} at row {row} is outside [0, 1]")]
    ResponseOutOfRange { row: usize, value: f64 },
    #[error("{0}")]
    Specification(String),
    #[error("no convergence after {iterations} iterations (gradient max-norm {gradient_norm:e})")]
    NoConvergence { iterations: usize, gradient_norm: f64 },
    #[error("unknown coefficient {0}")]
    UnknownCoefficient(String),
    #[error("{path}: {message}")]
    File { path: PathBuf, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl EconError {
    pub(crate) fn file(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        EconError::File {
            path: path.into(),
            message: message.to_string(),
        }
    }
}
