use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: invalid UTF-8 at byte offset {offset}")]
    Encoding { path: PathBuf, offset: usize },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("document {id:?} has {tokens} token(s) after preprocessing; a network needs at least 2")]
    DegenerateDocument { id: String, tokens: usize },

    #[error("metric {metric} is undefined here: {reason}")]
    MetricUndefined { metric: String, reason: String },

    #[error("cannot normalize {metric}: baseline ensemble mean is zero")]
    ZeroBaseline { metric: String },

    #[error("baseline ensemble for {metric} kept only {kept} of {total} realizations")]
    EnsembleDegenerate {
        metric: String,
        kept: usize,
        total: usize,
    },

    #[error("membership matrices do not align: {left} vs {right}")]
    ShapeMismatch { left: String, right: String },

    #[error("word {word:?} does not occur in document {id:?}")]
    WordNotFound { id: String, word: String },

    #[error("unknown attribute {0:?}")]
    UnknownAttribute(String),

    #[error("failed to read {path}: {source}")]
    ReadInput {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("failed to write {path}: {source}")]
    WriteOutput {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed CSV in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    /// Process exit code for the CLI: 2 for invalid inputs or configuration,
    /// 3 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Encoding { .. }
            | Error::Validation(_)
            | Error::DegenerateDocument { .. }
            | Error::UnknownAttribute(_)
            | Error::ReadInput { .. }
            | Error::Csv { .. } => 2,
            _ => 3,
        }
    }
}
