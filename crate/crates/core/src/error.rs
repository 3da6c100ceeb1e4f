use std::io;

use thiserror::Error;

use crate::graph::NodeId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: u64 },

    #[error("line {line}: duplicate edge {src} -> {dst}")]
    DuplicateEdge { line: usize, src: u64, dst: u64 },

    #[error("probability {value} outside [0, 1]")]
    ProbabilityRange { value: f64 },

    #[error("invalid weight model: {0}")]
    WeightModel(String),

    #[error("node {0} does not exist in the graph")]
    UnknownNode(u64),

    #[error("linear threshold weights exceed 1 at {} node(s), first: {}", .0.len(), .0[0])]
    LtViolation(Vec<NodeId>),

    #[error("node {0} is already a seed")]
    AlreadySeed(NodeId),

    #[error("gain report is stale: evaluated at version {report}, state is at {state}")]
    StaleReport { report: u64, state: u64 },

    #[error("k = {k} out of range for a graph with {nodes} nodes")]
    KOutOfRange { k: usize, nodes: usize },

    #[error("instance too large for exhaustive enumeration: {0}")]
    TooLarge(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("fixed-point iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error(transparent)]
    Io(#[from] io::Error),
}
