use thiserror::Error;

use crate::graph::{Edge, VertexId};

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("edge {0} is not present in the graph")]
    MissingEdge(Edge),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("({0},{1},{2}) is not an induced P3")]
    NotInducedP3(VertexId, VertexId, VertexId),
    #[error("{0:?} is not an induced path")]
    NotInducedPath(Vec<VertexId>),
    #[error("{0:?} is not an induced C4")]
    NotInducedC4([VertexId; 4]),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("graph has {n} vertices, above the cap of {cap}")]
    GraphTooLarge { n: usize, cap: usize },
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("structural audit failed: {0}")]
    AuditFailure(String),
    #[error("search exceeded its time limit")]
    Timeout,
}

pub type Result<T, E = CoreError> = std::result::Result<T, E>;
