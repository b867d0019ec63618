use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the solver library.
#[derive(Debug, Error)]
pub enum MapError {
    /// Caller supplied values outside the domain of an operation.
    #[error("invalid input: {0}")]
    Input(String),

    /// A heuristic combination or metaheuristic setup that is not allowed.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Malformed instance name, file, or registry line.
    #[error("parse error: {0}")]
    Parse(String),

    /// A weight submitted to the best-known registry that beats a proven bound.
    #[error("weight {weight} for {name}#{index} is below proven lower bound {bound}")]
    BelowLowerBound {
        name: String,
        index: u32,
        weight: f64,
        bound: f64,
    },

    /// Neighbourhood enumeration refused because the instance is too large.
    #[error("enumeration guard exceeded: {0}")]
    Guard(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl MapError {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        MapError::Input(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        MapError::Parse(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        MapError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = MapError> = std::result::Result<T, E>;
