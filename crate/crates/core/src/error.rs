use core::fmt;

use crate::graph::{EdgeId, NodeId};

/// Errors raised while building graphs, evaluating placements or searching.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An edge starts and ends at the same node.
    SelfCycle { edge: EdgeId, node: NodeId },
    /// An id refers to a node or cluster that does not exist, or ids are not dense.
    DanglingReference(&'static str, usize),
    /// A source or sink node has no seed cluster.
    UnseededTerminal(NodeId),
    /// A weight is negative or not finite.
    InvalidWeight(&'static str, usize),
    /// More source-to-sink paths than the configured cap.
    PathExplosion { cap: usize },
    /// A reference placement has zero computational or fronthaul cost.
    DegenerateNorm(&'static str),
    /// Seed nodes have fixed clusters and cannot be mutated.
    SeedMutation(NodeId),
    /// A node cannot reach any seed through the connection graph.
    UnreachableNode(NodeId),
    /// The exhaustive search space exceeds the configured cap.
    SearchSpaceTooLarge { size: Option<u128>, cap: u128 },
    /// A clustering scheme does not fit the graph.
    InvalidScheme(&'static str),
    /// A configuration or parameter value is out of range.
    InvalidParameter(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SelfCycle { edge, node } => {
                write!(f, "edge {} is a self-cycle on node {}", edge.0, node.0)
            }
            Error::DanglingReference(what, id) => write!(f, "unknown or non-dense {what} id {id}"),
            Error::UnseededTerminal(node) => {
                write!(f, "source/sink node {} has no seed cluster", node.0)
            }
            Error::InvalidWeight(what, id) => {
                write!(f, "{what} {id} has a negative or non-finite weight")
            }
            Error::PathExplosion { cap } => write!(f, "more than {cap} source-to-sink paths"),
            Error::DegenerateNorm(which) => write!(f, "{which} normalization constant is zero"),
            Error::SeedMutation(node) => write!(f, "node {} is a seed and cannot mutate", node.0),
            Error::UnreachableNode(node) => {
                write!(f, "node {} is not connected to any seed node", node.0)
            }
            Error::SearchSpaceTooLarge { size: Some(size), cap } => {
                write!(f, "search space of {size} assignments exceeds cap {cap}")
            }
            Error::SearchSpaceTooLarge { size: None, cap } => {
                write!(f, "search space overflows and exceeds cap {cap}")
            }
            Error::InvalidScheme(msg) => write!(f, "invalid clustering scheme: {msg}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

