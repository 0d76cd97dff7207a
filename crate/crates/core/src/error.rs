use std::path::PathBuf;

use crate::graph::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("self-loop on node {0} is not allowed")]
    SelfLoop(NodeId),

    #[error("trust weight {weight} on edge {src}->{dst} is outside [0, 1]")]
    EdgeWeight { src: NodeId, dst: NodeId, weight: f64 },

    #[error("node weight {weight} on node {node} must be finite and non-negative")]
    NodeWeight { node: NodeId, weight: f64 },

    #[error("unknown node {node} (graph has {n} nodes)")]
    UnknownNode { node: NodeId, n: usize },

    #[error("unknown item {item} (table has {n} items)")]
    UnknownItem { item: usize, n: usize },

    #[error("rating {rating} is outside the scale [{min}, {max}]")]
    RatingOutOfScale { rating: f64, min: f64, max: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("degenerate graph: max indegree + epsilon is zero")]
    DegenerateGraph,

    #[error("path length {len} outside [2, {l_max}]")]
    PathLength { len: usize, l_max: usize },

    #[error("corrupt path index at <{src},{dst}>: {reason}")]
    CorruptIndex {
        src: NodeId,
        dst: NodeId,
        reason: String,
    },

    #[error("graph invariant violated: {0}")]
    Invariant(String),

    #[error("node universes differ ({left} vs {right} nodes)")]
    UniverseMismatch { left: usize, right: usize },

    #[error("path budget of {0} stored paths exceeded")]
    PathBudgetExceeded(usize),

    #[error("{}:{line}: {reason}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("dataset is empty after filtering")]
    EmptyDataset,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
