//! Exhaustive search over every clustering scheme of a small graph.
//!
//! This is deliberately the plainest possible search: it enumerates the
//! assignments of the free nodes in lexicographic order (first free node most
//! significant), evaluates each with [`evaluate`], and keeps the first
//! strict minimum. Ties therefore resolve to the lexicographically smallest
//! assignment vector.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::cost::{evaluate, ClusteringScheme, CostBreakdown, CostProfile, FitnessParams};
use crate::error::Error;
use crate::graph::{ClusterId, NodeId, ProcessingGraph};

pub const DEFAULT_SEARCH_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    /// Largest number of assignments the search will enumerate.
    pub cap: u128,
    /// Limit each free node to the seed clusters of its connected component.
    pub restrict_to_component_seeds: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            cap: DEFAULT_SEARCH_CAP,
            restrict_to_component_seeds: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub scheme: ClusteringScheme,
    pub breakdown: CostBreakdown,
    /// Number of assignments evaluated.
    pub evaluated: u128,
}

/// Seed clusters found in each node's connected component, ascending.
fn component_seed_clusters(graph: &ProcessingGraph) -> Vec<Vec<ClusterId>> {
    let n = graph.node_count();
    let mut component = vec![usize::MAX; n];
    let mut seeds_of: Vec<Vec<ClusterId>> = Vec::new();
    for start in 0..n {
        if component[start] != usize::MAX {
            continue;
        }
        let id = seeds_of.len();
        let mut clusters = Vec::new();
        let mut queue = VecDeque::from([NodeId(start)]);
        component[start] = id;
        while let Some(v) = queue.pop_front() {
            if let Some(c) = graph.node(v).seed_cluster {
                clusters.push(c);
            }
            for &w in graph.neighbors(v) {
                if component[w.0] == usize::MAX {
                    component[w.0] = id;
                    queue.push_back(w);
                }
            }
        }
        clusters.sort_unstable();
        clusters.dedup();
        seeds_of.push(clusters);
    }
    component.into_iter().map(|c| seeds_of[c].clone()).collect()
}

/// Candidate clusters for every free node, in node-id order.
fn candidates(graph: &ProcessingGraph, options: &OracleOptions) -> Vec<(NodeId, Vec<ClusterId>)> {
    let all: Vec<ClusterId> = (0..graph.cluster_count()).map(ClusterId).collect();
    let restricted = options
        .restrict_to_component_seeds
        .then(|| component_seed_clusters(graph));
    graph
        .free_nodes()
        .map(|v| {
            let set = match &restricted {
                Some(r) => r[v.0].clone(),
                None => all.clone(),
            };
            (v, set)
        })
        .collect()
}

/// Number of assignments the search would enumerate, `None` on overflow.
pub fn search_space_size(graph: &ProcessingGraph, options: &OracleOptions) -> Option<u128> {
    candidates(graph, options)
        .iter()
        .try_fold(1u128, |acc, (_, set)| acc.checked_mul(set.len() as u128))
}

/// Minimum-fitness scheme over the whole search space.
pub fn exhaustive_optimum(
    graph: &ProcessingGraph,
    profile: &CostProfile,
    params: &FitnessParams,
    options: &OracleOptions,
) -> Result<OracleResult, Error> {
    profile.validate()?;
    params.validate(graph)?;
    let size = search_space_size(graph, options);
    match size {
        Some(s) if s <= options.cap => {}
        _ => return Err(Error::SearchSpaceTooLarge { size, cap: options.cap }),
    }
    let free = candidates(graph, options);
    if free.iter().any(|(_, set)| set.is_empty()) {
        return Err(Error::InvalidScheme("a free node has no candidate cluster"));
    }

    let mut scheme = ClusteringScheme {
        assignment: graph
            .nodes()
            .iter()
            .map(|v| v.seed_cluster.unwrap_or(ClusterId(0)))
            .collect(),
    };
    let mut digits = vec![0usize; free.len()];
    for (v, set) in &free {
        scheme.assignment[v.0] = set[0];
    }

    let mut best: Option<(ClusteringScheme, CostBreakdown)> = None;
    let mut evaluated = 0u128;
    loop {
        let b = evaluate(graph, &scheme, profile, params);
        evaluated += 1;
        if best.as_ref().is_none_or(|(_, cur)| b.fitness < cur.fitness) {
            best = Some((scheme.clone(), b));
        }
        // Odometer increment, last free node fastest.
        let mut pos = free.len();
        loop {
            if pos == 0 {
                let (scheme, breakdown) = best.expect("at least one assignment");
                return Ok(OracleResult {
                    scheme,
                    breakdown,
                    evaluated,
                });
            }
            pos -= 1;
            let (v, set) = &free[pos];
            digits[pos] += 1;
            if digits[pos] < set.len() {
                scheme.assignment[v.0] = set[digits[pos]];
                break;
            }
            digits[pos] = 0;
            scheme.assignment[v.0] = set[0];
        }
    }
}

/// Exact optimum for each tradeoff coefficient, in input order.
pub fn pareto_sweep(
    graph: &ProcessingGraph,
    profile: &CostProfile,
    params_base: &FitnessParams,
    alphas: &[f64],
    options: &OracleOptions,
) -> Result<Vec<(f64, OracleResult)>, Error> {
    alphas
        .iter()
        .map(|&alpha| {
            exhaustive_optimum(graph, profile, &params_base.with_alpha(alpha), options)
                .map(|r| (alpha, r))
        })
        .collect()
}
