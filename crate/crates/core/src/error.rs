use std::path::PathBuf;

use thiserror::Error;

use crate::perm::PermError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("degree mismatch: expected {expected}, got {got}")]
    Degree { expected: usize, got: usize },
    #[error("origami is disconnected")]
    Disconnected,
    #[error("x is not in canonical form for its cycle type: {0}")]
    NonCanonicalX(String),
    #[error("cannot parse origami from {input:?}: {reason}")]
    ParseOrigami { input: String, reason: String },
    #[error("malformed double cover: {0}")]
    MalformedCover(String),
    #[error("class not found for {0}")]
    ClassNotFound(String),
    #[error("unknown class id {0}")]
    UnknownClass(u32),
    #[error("degree {degree} exceeds the census limit of {limit}")]
    DegreeTooLarge { degree: usize, limit: usize },
    #[error("census for degree {degree} needs about {needed} MiB, over the {budget} MiB budget")]
    MemoryBudget { degree: usize, needed: u64, budget: u64 },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("cache file {path}: {reason}")]
    Cache { path: PathBuf, reason: String },
    #[error("cache directory {0} is locked by another process")]
    Locked(PathBuf),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
