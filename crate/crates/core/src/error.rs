use thiserror::Error;

use crate::graph::{Scope, VertexId};

/// Errors raised by graph construction, algorithms and serialization.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex id {vertex} out of range for graph with {vertex_count} vertices")]
    VertexOutOfRange { vertex: VertexId, vertex_count: u64 },

    #[error("{scope} attribute '{name}' has {actual} values, expected {expected}")]
    AttributeLength {
        scope: Scope,
        name: String,
        expected: u64,
        actual: u64,
    },

    #[error("{scope} attribute '{name}' not found")]
    AttributeNotFound { scope: Scope, name: String },

    #[error("{scope} attribute '{name}' is not numeric")]
    AttributeNotNumeric { scope: Scope, name: String },

    #[error("weight vector has {actual} entries, graph has {expected} edges")]
    WeightLength { expected: u64, actual: u64 },

    #[error("invalid weight {weight} on edge {edge}: {reason}")]
    InvalidWeight {
        edge: u64,
        weight: f64,
        reason: &'static str,
    },

    #[error("operation requires a directed graph")]
    RequiresDirected,

    #[error("operation requires an undirected graph")]
    RequiresUndirected,

    #[error("graph contains a cycle through vertex {vertex}")]
    Cycle { vertex: VertexId },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("graph is not connected")]
    Disconnected,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("memory allocation of {bytes} bytes failed")]
    Allocation { bytes: u64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}
