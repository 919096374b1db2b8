use thiserror::Error;

use crate::graph::{EdgeId, ValidationReport};
use crate::moves::Move;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(ValidationReport),
    #[error("malformed move {mv:?}: {reason}")]
    MalformedMove { mv: Move, reason: String },
    #[error("batch moves on edges {first} and {second} overlap")]
    OverlappingBatch { first: EdgeId, second: EdgeId },
    #[error("class cap of {cap} exceeded")]
    CapExceeded { cap: usize },
    #[error("search radius {radius} exceeded before reaching the target")]
    RadiusExceeded { radius: f64 },
    #[error("graphs do not share a stratum: {0}")]
    Mismatch(String),
    #[error("graph is not a tree")]
    NotTree,
    #[error("graph is not treelike")]
    NotTreelike,
    #[error("{0}")]
    Domain(String),
    #[error("replay mismatch: {0}")]
    ReplayMismatch(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
