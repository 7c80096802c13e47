use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown objective {0:?} (expected one of: lotz, omm)")]
    UnknownObjective(String),

    #[error("fitness vectors have different dimensions ({0} vs {1})")]
    DimensionMismatch(usize, usize),

    #[error("generation {requested} is not after the current generation {current}")]
    NonIncreasingGeneration { current: u64, requested: u64 },

    #[error("evaluation stamped for generation {stamp} queried in generation {current}")]
    StaleGeneration { current: u64, stamp: u64 },

    #[error("population is not ({c},{d})-separated: {others} point(s) outside both regions")]
    NotSeparated { c: i64, d: i64, others: usize },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for command line front ends: 1 configuration, 2 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Csv(_) | Error::Json(_) => 2,
            _ => 1,
        }
    }
}
