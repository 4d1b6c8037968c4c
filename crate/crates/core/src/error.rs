use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is singular (pivot {pivot:e} below threshold {threshold:e})")]
    Singular { pivot: f64, threshold: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The full-rank reweighting factor could not be inverted.
    #[error("numerical singularity in reweighting step at t={step}")]
    NumericalSingularity { step: u64 },

    #[error("parse error at row {row}, column {col}: {msg}")]
    Parse { row: usize, col: usize, msg: String },

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("empty input")]
    EmptyFile,

    #[error("feature indices not ascending on line {line}")]
    NonAscendingIndex { line: usize },

    #[error("class {class} has {count} samples, need at least {needed}")]
    InsufficientClassSamples { class: i8, count: usize, needed: usize },

    #[error("invalid class ratio {0}")]
    InvalidRatio(f64),

    #[error("unknown class id {0}")]
    UnknownClass(usize),

    #[error("need at least {needed} records, got {got}")]
    TooFewRecords { needed: usize, got: usize },

    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error("bad snapshot: {0}")]
    Snapshot(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Process exit code used by the benchmark binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Singular { .. } | Error::NumericalSingularity { .. } => 3,
            Error::Io { .. } => 4,
            _ => 2,
        }
    }

    /// Short machine-readable category name.
    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            3 => "numerical",
            4 => "io",
            _ => "validation",
        }
    }
}
