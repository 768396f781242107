//! Crate-wide error type.

use std::path::PathBuf;

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes surfaced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("text is empty or contains no word tokens")]
    EmptyText,

    #[error("duplicate record id {0:?}")]
    DuplicateRecordId(String),

    #[error("unknown author {0:?}")]
    UnknownAuthor(String),

    #[error("no scorable pairs for author {author:?} (need >=2 texts for some prompt)")]
    NoPairs { author: String },

    #[error("word edit similarity is undefined for two empty token lists")]
    EmptyPair,

    #[error("corpus has a single author class; class marginals are degenerate")]
    SingleAuthor,

    #[error("word {0:?} is not in the vocabulary")]
    OutOfVocabulary(String),

    #[error("bias axis {axis:?} is degenerate: {reason}")]
    DegenerateAxis { axis: String, reason: String },

    #[error("malformed data: {0}")]
    Format(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("stratified split impossible: {0}")]
    Stratification(String),

    #[error("missing dependency: {0}")]
    MissingDependency(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Wrap an i/o error with the path it occurred on.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code the CLI maps this error to: 2 for configuration
    /// and dependency problems, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::MissingDependency(_) => 2,
            _ => 1,
        }
    }
}
