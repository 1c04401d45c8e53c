use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug)]
pub enum Error {
    #[error("vertex {vertex} out of range (graph has {num_vertices} vertices)")]
    InvalidVertex { vertex: usize, num_vertices: usize },

    #[error("graph has no edges to sample from")]
    NoEdges,

    #[error("graph is empty")]
    EmptyGraph,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("not enough samples for a power-law fit: {found} degrees >= k_min={k_min}, need at least {needed}")]
    InsufficientSamples {
        found: usize,
        needed: usize,
        k_min: usize,
    },

    #[error("degenerate degree histogram: {0}")]
    DegenerateHistogram(String),

    #[error("unknown preset '{name}'; valid presets: {valid}")]
    UnknownPreset { name: String, valid: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
