//! Cost model for a clustering of a [`ProcessingGraph`].
//!
//! - computational cost of a cell site grows exponentially with the total
//!   complexity it hosts; the central office is free,
//! - fronthaul cost between two locations grows exponentially with the total
//!   bandwidth of the edges crossing between them, pooled over both
//!   directions; links between two cell sites use a steeper base,
//! - each node on a path at a cell site delays the path by its complexity
//!   times the total complexity hosted at that site.
//!
//! [`evaluate`] folds the three into one penalized fitness, lower is better:
//! `alpha * comp / comp_norm + (1 - alpha) * fh / fh_norm + beta * sum_p (d_p - D_p)^+`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::graph::{ClusterId, ClusterKind, NodeId, PathId, ProcessingGraph};

/// A placement: entry `k` is the cluster hosting node `k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClusteringScheme {
    pub assignment: Vec<ClusterId>,
}

impl ClusteringScheme {
    /// Wraps an assignment after checking it against `graph`.
    pub fn new(graph: &ProcessingGraph, assignment: Vec<ClusterId>) -> Result<Self, Error> {
        let scheme = ClusteringScheme { assignment };
        scheme.validate(graph)?;
        Ok(scheme)
    }

    pub fn validate(&self, graph: &ProcessingGraph) -> Result<(), Error> {
        if self.assignment.len() != graph.node_count() {
            return Err(Error::InvalidScheme("length differs from node count"));
        }
        for (node, &c) in graph.nodes().iter().zip(&self.assignment) {
            if c.0 >= graph.cluster_count() {
                return Err(Error::InvalidScheme("unknown cluster id"));
            }
            if node.seed_cluster.is_some_and(|s| s != c) {
                return Err(Error::InvalidScheme("seed node moved from its seed cluster"));
            }
        }
        Ok(())
    }

    pub fn cluster_of(&self, node: NodeId) -> ClusterId {
        self.assignment[node.0]
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }
}

/// Cost rules per location kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostProfile {
    /// Base of the exponential computational cost at a cell site.
    pub cell_site_comp_base: f64,
    /// Flat computational cost of a central office.
    pub co_comp_cost: f64,
    /// Base of the exponential fronthaul cost between two cell sites.
    pub site_to_site_fh_base: f64,
    /// Base of the exponential fronthaul cost between a cell site and a
    /// central office (also used between two central offices).
    pub site_to_co_fh_base: f64,
    /// Cost of traffic that stays inside one location.
    pub intra_cluster_fh_cost: f64,
    /// Per-node delay at a central office.
    pub co_delay: f64,
}

impl Default for CostProfile {
    fn default() -> Self {
        CostProfile {
            cell_site_comp_base: 2.0,
            co_comp_cost: 0.0,
            site_to_site_fh_base: 4.0,
            site_to_co_fh_base: 2.0,
            intra_cluster_fh_cost: 0.0,
            co_delay: 0.0,
        }
    }
}

impl CostProfile {
    pub fn validate(&self) -> Result<(), Error> {
        let bases = [
            self.cell_site_comp_base,
            self.site_to_site_fh_base,
            self.site_to_co_fh_base,
        ];
        if bases.iter().any(|b| !(b.is_finite() && *b > 1.0)) {
            return Err(Error::InvalidParameter("cost bases must be finite and > 1"));
        }
        let flat = [self.co_comp_cost, self.intra_cluster_fh_cost, self.co_delay];
        if flat.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(Error::InvalidParameter("flat costs must be finite and >= 0"));
        }
        Ok(())
    }
}

/// Scalarization and penalty parameters of the fitness function.
#[derive(Debug, Clone, PartialEq)]
pub struct FitnessParams {
    /// Weight of the computational term; `1 - alpha` weighs fronthaul.
    pub alpha: f64,
    /// Delay penalty factor.
    pub beta: f64,
    /// Delay bound per path, indexed by [`PathId`].
    pub delay_bounds: Vec<f64>,
    pub comp_norm: f64,
    pub fh_norm: f64,
}

impl FitnessParams {
    pub const DEFAULT_BETA: f64 = 10.0;
    pub const DEFAULT_DELAY_BOUND: f64 = 30.0;

    /// Uniform delay bound on every path, norms from [`compute_norms`].
    pub fn new(
        graph: &ProcessingGraph,
        profile: &CostProfile,
        alpha: f64,
        beta: f64,
        delay_bound: f64,
    ) -> Result<Self, Error> {
        let (comp_norm, fh_norm) = compute_norms(graph, profile)?;
        let params = FitnessParams {
            alpha,
            beta,
            delay_bounds: vec![delay_bound; graph.paths().len()],
            comp_norm,
            fh_norm,
        };
        params.validate(graph)?;
        Ok(params)
    }

    pub fn with_alpha(&self, alpha: f64) -> Self {
        FitnessParams {
            alpha,
            ..self.clone()
        }
    }

    pub fn with_delay_bound(&self, delay_bound: f64) -> Self {
        FitnessParams {
            delay_bounds: vec![delay_bound; self.delay_bounds.len()],
            ..self.clone()
        }
    }

    pub fn validate(&self, graph: &ProcessingGraph) -> Result<(), Error> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidParameter("alpha must lie in [0, 1]"));
        }
        if !(self.beta.is_finite() && self.beta > 1.0) {
            return Err(Error::InvalidParameter("beta must be finite and > 1"));
        }
        if self.delay_bounds.len() != graph.paths().len() {
            return Err(Error::InvalidParameter("one delay bound per path required"));
        }
        if self.delay_bounds.iter().any(|d| d.is_nan() || *d <= 0.0) {
            return Err(Error::InvalidParameter("delay bounds must be > 0"));
        }
        if !(self.comp_norm.is_finite() && self.comp_norm > 0.0)
            || !(self.fh_norm.is_finite() && self.fh_norm > 0.0)
        {
            return Err(Error::InvalidParameter("norms must be finite and > 0"));
        }
        Ok(())
    }
}

/// Every term of the fitness of one scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct CostBreakdown {
    pub comp_total: f64,
    pub fh_total: f64,
    pub comp_scaled: f64,
    pub fh_scaled: f64,
    /// Delay per path, indexed by [`PathId`].
    pub path_delays: Vec<f64>,
    /// Total delay overshoot, before multiplication by beta.
    pub penalty: f64,
    pub fitness: f64,
}

impl CostBreakdown {
    pub fn max_path_delay(&self) -> f64 {
        self.path_delays.iter().copied().fold(0.0, f64::max)
    }
}

/// Total complexity hosted by each cluster.
pub fn cluster_loads(graph: &ProcessingGraph, scheme: &ClusteringScheme) -> Vec<f64> {
    let mut loads = vec![0.0; graph.cluster_count()];
    for (node, c) in graph.nodes().iter().zip(&scheme.assignment) {
        loads[c.0] += node.complexity;
    }
    loads
}

fn comp_cost_of(kind: ClusterKind, load: f64, profile: &CostProfile) -> f64 {
    match kind {
        ClusterKind::CellSite => libm::pow(profile.cell_site_comp_base, load),
        ClusterKind::CentralOffice => profile.co_comp_cost,
    }
}

/// Pair cost given the pooled bandwidth crossing between `i` and `j`.
/// Pairs without traffic cost nothing.
fn fh_cost_of(graph: &ProcessingGraph, profile: &CostProfile, i: ClusterId, j: ClusterId, bandwidth: f64) -> f64 {
    if bandwidth <= 0.0 {
        return 0.0;
    }
    if i == j {
        return profile.intra_cluster_fh_cost;
    }
    let both_sites = graph.cluster(i).is_cell_site() && graph.cluster(j).is_cell_site();
    let base = if both_sites {
        profile.site_to_site_fh_base
    } else {
        profile.site_to_co_fh_base
    };
    libm::pow(base, bandwidth)
}

/// Computational cost of one cluster. An empty cell site still costs `base^0`.
pub fn computational_cost(
    graph: &ProcessingGraph,
    scheme: &ClusteringScheme,
    profile: &CostProfile,
    cluster: ClusterId,
) -> f64 {
    let load: f64 = graph
        .nodes()
        .iter()
        .zip(&scheme.assignment)
        .filter(|(_, &c)| c == cluster)
        .map(|(n, _)| n.complexity)
        .sum();
    comp_cost_of(graph.cluster(cluster).kind, load, profile)
}

/// Fronthaul cost between clusters `i` and `j`, symmetric in its arguments.
/// With `i == j` this is the intra-cluster cost.
pub fn fronthauling_cost(
    graph: &ProcessingGraph,
    scheme: &ClusteringScheme,
    profile: &CostProfile,
    i: ClusterId,
    j: ClusterId,
) -> f64 {
    let bandwidth: f64 = graph
        .edges()
        .iter()
        .filter(|e| {
            let (a, b) = (scheme.cluster_of(e.src), scheme.cluster_of(e.dst));
            (a == i && b == j) || (a == j && b == i)
        })
        .map(|e| e.bandwidth)
        .sum();
    fh_cost_of(graph, profile, i, j, bandwidth)
}

fn delay_with_loads(
    graph: &ProcessingGraph,
    scheme: &ClusteringScheme,
    profile: &CostProfile,
    loads: &[f64],
    path: &[NodeId],
) -> f64 {
    path.iter()
        .map(|&v| {
            let c = scheme.cluster_of(v);
            match graph.cluster(c).kind {
                ClusterKind::CellSite => graph.node(v).complexity * loads[c.0],
                ClusterKind::CentralOffice => profile.co_delay,
            }
        })
        .sum()
}

/// Processing delay accumulated along one path.
pub fn path_delay(
    graph: &ProcessingGraph,
    scheme: &ClusteringScheme,
    profile: &CostProfile,
    path: PathId,
) -> f64 {
    let loads = cluster_loads(graph, scheme);
    delay_with_loads(graph, scheme, profile, &loads, &graph.paths()[path.0])
}

/// Full cost breakdown and penalized fitness of `scheme`.
///
/// `scheme` must be valid for `graph` and `params` must carry one delay bound
/// per path.
pub fn evaluate(
    graph: &ProcessingGraph,
    scheme: &ClusteringScheme,
    profile: &CostProfile,
    params: &FitnessParams,
) -> CostBreakdown {
    let k = graph.cluster_count();
    let loads = cluster_loads(graph, scheme);
    let comp_total: f64 = graph
        .clusters()
        .iter()
        .map(|c| comp_cost_of(c.kind, loads[c.id.0], profile))
        .sum();

    // Upper triangle of the pooled pair bandwidths, diagonal included.
    let mut pair = vec![0.0; k * k];
    for e in graph.edges() {
        let (a, b) = (scheme.cluster_of(e.src).0, scheme.cluster_of(e.dst).0);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        pair[lo * k + hi] += e.bandwidth;
    }
    let mut fh_total = 0.0;
    for i in 0..k {
        for j in i..k {
            fh_total += fh_cost_of(graph, profile, ClusterId(i), ClusterId(j), pair[i * k + j]);
        }
    }

    let path_delays: Vec<f64> = graph
        .paths()
        .iter()
        .map(|p| delay_with_loads(graph, scheme, profile, &loads, p))
        .collect();
    let penalty: f64 = path_delays
        .iter()
        .zip(&params.delay_bounds)
        .map(|(d, bound)| (d - bound).max(0.0))
        .sum();

    let comp_scaled = comp_total / params.comp_norm;
    let fh_scaled = fh_total / params.fh_norm;
    let fitness =
        params.alpha * comp_scaled + (1.0 - params.alpha) * fh_scaled + params.beta * penalty;
    CostBreakdown {
        comp_total,
        fh_total,
        comp_scaled,
        fh_scaled,
        path_delays,
        penalty,
        fitness,
    }
}

/// Places every free node at the cell site of its nearest cell-site seed
/// (breadth-first through free nodes, ties to the lower cluster id). Nodes no
/// cell-site seed reaches go to the central office.
pub fn all_distributed(graph: &ProcessingGraph) -> ClusteringScheme {
    let n = graph.node_count();
    let fallback = graph.central_office().unwrap_or(ClusterId(0));
    let mut assignment: Vec<Option<ClusterId>> = graph.nodes().iter().map(|v| v.seed_cluster).collect();
    let mut frontier: Vec<NodeId> = graph
        .nodes()
        .iter()
        .filter(|v| v.seed_cluster.is_some_and(|c| graph.cluster(c).is_cell_site()))
        .map(|v| v.id)
        .collect();
    let mut reached = vec![false; n];
    for v in &frontier {
        reached[v.0] = true;
    }
    while !frontier.is_empty() {
        let mut next: Vec<NodeId> = Vec::new();
        for &v in &frontier {
            for &w in graph.neighbors(v) {
                if graph.node(w).is_seed() || (reached[w.0] && !next.contains(&w)) {
                    continue;
                }
                let candidate = assignment[v.0];
                if reached[w.0] {
                    assignment[w.0] = assignment[w.0].min(candidate);
                } else {
                    reached[w.0] = true;
                    assignment[w.0] = candidate;
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    ClusteringScheme {
        assignment: assignment.into_iter().map(|c| c.unwrap_or(fallback)).collect(),
    }
}

/// Places every free node at the first central office.
pub fn all_centralized(graph: &ProcessingGraph) -> Option<ClusteringScheme> {
    let co = graph.central_office()?;
    Some(ClusteringScheme {
        assignment: graph
            .nodes()
            .iter()
            .map(|v| v.seed_cluster.unwrap_or(co))
            .collect(),
    })
}

/// Normalization constants: computational cost of the all-distributed
/// placement, and the larger fronthaul cost of the all-distributed and
/// all-centralized placements. Both depend only on the graph and profile.
pub fn compute_norms(graph: &ProcessingGraph, profile: &CostProfile) -> Result<(f64, f64), Error> {
    // Raw totals do not depend on alpha, beta or bounds.
    let probe = FitnessParams {
        alpha: 0.0,
        beta: FitnessParams::DEFAULT_BETA,
        delay_bounds: vec![f64::INFINITY; graph.paths().len()],
        comp_norm: 1.0,
        fh_norm: 1.0,
    };
    let distributed = evaluate(graph, &all_distributed(graph), profile, &probe);
    let mut fh_norm = distributed.fh_total;
    if let Some(centralized) = all_centralized(graph) {
        fh_norm = fh_norm.max(evaluate(graph, &centralized, profile, &probe).fh_total);
    }
    let comp_norm = distributed.comp_total;
    if comp_norm.is_nan() || comp_norm <= 0.0 {
        return Err(Error::DegenerateNorm("computational"));
    }
    if fh_norm.is_nan() || fh_norm <= 0.0 {
        return Err(Error::DegenerateNorm("fronthaul"));
    }
    Ok((comp_norm, fh_norm))
}
