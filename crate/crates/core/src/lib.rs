//! Graph model and customized genetic search for splitting baseband
//! processing functions between remote cell sites and a central office.
//!
//! A processing structure is a weighted directed graph: nodes are baseband
//! functions weighted by computational complexity, edges are information
//! flows weighted by bandwidth. A placement is a clustering of the nodes onto
//! physical locations. Each placement is scored by an exponential
//! computational cost at cell sites, an exponential fronthaul cost between
//! locations, and a penalty for processing chains whose delay exceeds their
//! bound.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, experiment sweeps
//! and the command-line driver live in the `bbsplit` crate.
//!
//! - [`graph`]: the immutable [`ProcessingGraph`] with paths and connectivity.
//! - [`scenario`]: the two-cell reference structure and its N-cell generalization.
//! - [`cost`]: computational cost, fronthaul cost, path delay and fitness.
//! - [`ga`]: seeded encoding, roulette selection, dispersive crossover and
//!   graph-based mutation.
//! - [`oracle`]: exhaustive search used as ground truth on small graphs.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod cost;
pub mod error;
pub mod ga;
pub mod graph;
pub mod oracle;
pub mod scenario;

pub use cost::{ClusteringScheme, CostBreakdown, CostProfile, FitnessParams};
pub use error::Error;
pub use ga::{GaConfig, GaResult, Individual};
pub use graph::{
    Cluster, ClusterId, ClusterKind, EdgeId, FlowEdge, FunctionNode, NodeId, NodeKind, PathId,
    ProcessingGraph,
};
pub use scenario::{NodeTypeTable, ScenarioSpec};
