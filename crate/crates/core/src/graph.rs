//! Weighted directed graphs of baseband processing functions.
//!
//! Nodes carry a computational complexity, edges carry the bandwidth of the
//! information flow between two functions. Clusters are physical locations.
//! Once built, a [`ProcessingGraph`] is immutable and caches its
//! source-to-sink paths and its undirected connection matrix, so one graph can
//! be shared by every placement evaluated against it.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::Error;

/// Default upper bound on the number of enumerated paths.
pub const DEFAULT_PATH_CAP: usize = 10_000;

/// Dense node index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

/// Dense edge index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

/// Dense cluster (physical location) index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClusterId(pub usize);

/// Index into [`ProcessingGraph::paths`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Display for ClusterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Type of a baseband function.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    RadioTx,
    RadioRx,
    Fft,
    Ifft,
    MimoTx,
    MimoRx,
    Modulation,
    Demodulation,
    Coding,
    Decoding,
    SourceDl,
    SinkUl,
    Custom(String),
}

impl NodeKind {
    /// The twelve built-in kinds, in table order.
    pub const BUILTIN: [NodeKind; 12] = [
        NodeKind::RadioTx,
        NodeKind::RadioRx,
        NodeKind::Fft,
        NodeKind::Ifft,
        NodeKind::MimoTx,
        NodeKind::MimoRx,
        NodeKind::Modulation,
        NodeKind::Demodulation,
        NodeKind::Coding,
        NodeKind::Decoding,
        NodeKind::SourceDl,
        NodeKind::SinkUl,
    ];

    pub fn as_str(&self) -> &str {
        match self {
            NodeKind::RadioTx => "radioTX",
            NodeKind::RadioRx => "radioRX",
            NodeKind::Fft => "fft",
            NodeKind::Ifft => "ifft",
            NodeKind::MimoTx => "MIMOtx",
            NodeKind::MimoRx => "MIMOrx",
            NodeKind::Modulation => "mod",
            NodeKind::Demodulation => "demod",
            NodeKind::Coding => "code",
            NodeKind::Decoding => "decode",
            NodeKind::SourceDl => "sourceDL",
            NodeKind::SinkUl => "sinkUL",
            NodeKind::Custom(tag) => tag,
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NodeKind {
    type Err = core::convert::Infallible;

    /// Built-in names map to their variant; anything else is a custom tag.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(NodeKind::BUILTIN
            .iter()
            .find(|k| k.as_str() == s)
            .cloned()
            .unwrap_or_else(|| NodeKind::Custom(s.to_string())))
    }
}

/// A baseband processing function.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionNode {
    pub id: NodeId,
    pub kind: NodeKind,
    /// Human-readable name such as `MIMOtx.1.2`.
    pub label: String,
    /// Computational complexity, in abstract compute units.
    pub complexity: f64,
    /// Fixed cluster for seed nodes.
    pub seed_cluster: Option<ClusterId>,
}

impl FunctionNode {
    pub fn new(id: usize, kind: NodeKind, label: impl Into<String>, complexity: f64) -> Self {
        FunctionNode {
            id: NodeId(id),
            kind,
            label: label.into(),
            complexity,
            seed_cluster: None,
        }
    }

    pub fn seeded(mut self, cluster: ClusterId) -> Self {
        self.seed_cluster = Some(cluster);
        self
    }

    pub fn is_seed(&self) -> bool {
        self.seed_cluster.is_some()
    }
}

/// A directed information flow between two functions.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowEdge {
    pub id: EdgeId,
    pub src: NodeId,
    pub dst: NodeId,
    /// Bandwidth, in abstract bandwidth units.
    pub bandwidth: f64,
    /// Cooperative (CoMP) cross-link. Carries fronthaul cost but is not part
    /// of any processing path.
    pub comp_link: bool,
}

impl FlowEdge {
    pub fn new(id: usize, src: usize, dst: usize, bandwidth: f64) -> Self {
        FlowEdge {
            id: EdgeId(id),
            src: NodeId(src),
            dst: NodeId(dst),
            bandwidth,
            comp_link: false,
        }
    }

    pub fn comp(mut self) -> Self {
        self.comp_link = true;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClusterKind {
    CellSite,
    CentralOffice,
}

/// A physical location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    pub id: ClusterId,
    pub kind: ClusterKind,
    pub label: String,
}

impl Cluster {
    pub fn new(id: usize, kind: ClusterKind, label: impl Into<String>) -> Self {
        Cluster {
            id: ClusterId(id),
            kind,
            label: label.into(),
        }
    }

    pub fn is_cell_site(&self) -> bool {
        self.kind == ClusterKind::CellSite
    }
}

/// Validated, immutable processing graph.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessingGraph {
    nodes: Vec<FunctionNode>,
    edges: Vec<FlowEdge>,
    clusters: Vec<Cluster>,
    paths: Vec<Vec<NodeId>>,
    adjacency: Vec<Vec<NodeId>>,
    connection: Vec<bool>,
}

impl ProcessingGraph {
    /// Validates the lists and builds the graph with the default path cap.
    pub fn build(
        nodes: Vec<FunctionNode>,
        edges: Vec<FlowEdge>,
        clusters: Vec<Cluster>,
    ) -> Result<Self, Error> {
        Self::build_with_path_cap(nodes, edges, clusters, DEFAULT_PATH_CAP)
    }

    pub fn build_with_path_cap(
        nodes: Vec<FunctionNode>,
        edges: Vec<FlowEdge>,
        clusters: Vec<Cluster>,
        path_cap: usize,
    ) -> Result<Self, Error> {
        for (i, c) in clusters.iter().enumerate() {
            if c.id.0 != i {
                return Err(Error::DanglingReference("cluster", c.id.0));
            }
        }
        for (i, n) in nodes.iter().enumerate() {
            if n.id.0 != i {
                return Err(Error::DanglingReference("node", n.id.0));
            }
            if !(n.complexity.is_finite() && n.complexity >= 0.0) {
                return Err(Error::InvalidWeight("node", i));
            }
            if let Some(seed) = n.seed_cluster {
                if seed.0 >= clusters.len() {
                    return Err(Error::DanglingReference("cluster", seed.0));
                }
            }
        }
        let n = nodes.len();
        for (i, e) in edges.iter().enumerate() {
            if e.id.0 != i {
                return Err(Error::DanglingReference("edge", e.id.0));
            }
            for end in [e.src, e.dst] {
                if end.0 >= n {
                    return Err(Error::DanglingReference("node", end.0));
                }
            }
            if e.src == e.dst {
                return Err(Error::SelfCycle {
                    edge: e.id,
                    node: e.src,
                });
            }
            if !(e.bandwidth.is_finite() && e.bandwidth >= 0.0) {
                return Err(Error::InvalidWeight("edge", i));
            }
        }

        let mut neighbor_sets = vec![BTreeSet::new(); n];
        let mut connection = vec![false; n * n];
        for e in &edges {
            neighbor_sets[e.src.0].insert(e.dst);
            neighbor_sets[e.dst.0].insert(e.src);
            connection[e.src.0 * n + e.dst.0] = true;
            connection[e.dst.0 * n + e.src.0] = true;
        }
        let adjacency = neighbor_sets
            .into_iter()
            .map(|s| s.into_iter().collect())
            .collect();

        let mut graph = ProcessingGraph {
            nodes,
            edges,
            clusters,
            paths: Vec::new(),
            adjacency,
            connection,
        };
        let (sources, sinks) = graph.terminals();
        if let Some(&bad) = sources
            .iter()
            .chain(sinks.iter())
            .find(|v| !graph.nodes[v.0].is_seed())
        {
            return Err(Error::UnseededTerminal(bad));
        }
        graph.paths = enumerate_paths(&graph, path_cap)?;
        Ok(graph)
    }

    pub fn nodes(&self) -> &[FunctionNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &FunctionNode {
        &self.nodes[id.0]
    }

    pub fn edges(&self) -> &[FlowEdge] {
        &self.edges
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn cluster(&self, id: ClusterId) -> &Cluster {
        &self.clusters[id.0]
    }

    /// Simple source-to-sink paths in lexicographic node-id order.
    pub fn paths(&self) -> &[Vec<NodeId>] {
        &self.paths
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    /// Nodes adjacent to `node` via any edge, ignoring direction, sorted by id.
    pub fn neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.adjacency[node.0]
    }

    /// Entry `(i, j)` of the symmetric connection matrix.
    pub fn is_connected(&self, i: NodeId, j: NodeId) -> bool {
        self.connection[i.0 * self.nodes.len() + j.0]
    }

    /// Ids of the nodes that are not seeds, ascending.
    pub fn free_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().filter(|n| !n.is_seed()).map(|n| n.id)
    }

    /// The first central-office cluster, if any.
    pub fn central_office(&self) -> Option<ClusterId> {
        self.clusters
            .iter()
            .find(|c| c.kind == ClusterKind::CentralOffice)
            .map(|c| c.id)
    }

    /// Sources (outbound processing edges, no inbound ones) and sinks (the
    /// reverse). CoMP links are ignored and isolated nodes are neither.
    pub fn terminals(&self) -> (Vec<NodeId>, Vec<NodeId>) {
        let n = self.nodes.len();
        let mut indeg = vec![0usize; n];
        let mut outdeg = vec![0usize; n];
        for e in self.edges.iter().filter(|e| !e.comp_link) {
            outdeg[e.src.0] += 1;
            indeg[e.dst.0] += 1;
        }
        let sources = (0..n)
            .filter(|&v| indeg[v] == 0 && outdeg[v] > 0)
            .map(NodeId)
            .collect();
        let sinks = (0..n)
            .filter(|&v| outdeg[v] == 0 && indeg[v] > 0)
            .map(NodeId)
            .collect();
        (sources, sinks)
    }
}

/// Enumerates every simple directed path from a source to a sink, skipping
/// CoMP links. Output is in lexicographic order of node ids.
pub fn enumerate_paths(graph: &ProcessingGraph, cap: usize) -> Result<Vec<Vec<NodeId>>, Error> {
    let n = graph.node_count();
    let mut succ = vec![BTreeSet::new(); n];
    for e in graph.edges().iter().filter(|e| !e.comp_link) {
        succ[e.src.0].insert(e.dst.0);
    }
    let succ: Vec<Vec<usize>> = succ.into_iter().map(|s| s.into_iter().collect()).collect();
    let (sources, _) = graph.terminals();

    let mut paths = Vec::new();
    let mut on_path = vec![false; n];
    let mut path = Vec::new();
    for s in sources {
        // Iterative DFS; each frame holds a node and the index of its next successor.
        let mut stack = vec![(s.0, 0usize)];
        on_path[s.0] = true;
        path.push(NodeId(s.0));
        while let Some(top) = stack.last_mut() {
            let (v, next) = *top;
            if succ[v].is_empty() {
                if paths.len() == cap {
                    return Err(Error::PathExplosion { cap });
                }
                paths.push(path.clone());
            }
            match succ[v][next..].iter().position(|&w| !on_path[w]) {
                Some(offset) => {
                    let w = succ[v][next + offset];
                    top.1 = next + offset + 1;
                    on_path[w] = true;
                    path.push(NodeId(w));
                    stack.push((w, 0));
                }
                None => {
                    stack.pop();
                    on_path[v] = false;
                    path.pop();
                }
            }
        }
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn co_and_site() -> Vec<Cluster> {
        vec![
            Cluster::new(0, ClusterKind::CentralOffice, "co"),
            Cluster::new(1, ClusterKind::CellSite, "site"),
        ]
    }

    fn node(id: usize) -> FunctionNode {
        FunctionNode::new(id, NodeKind::Custom("x".into()), alloc::format!("n{id}"), 1.0)
    }

    #[test]
    fn smallest_legal_graph() {
        let g = ProcessingGraph::build(
            vec![
                node(0).seeded(ClusterId(0)),
                node(1).seeded(ClusterId(1)),
            ],
            vec![FlowEdge::new(0, 0, 1, 1.0)],
            co_and_site(),
        )
        .unwrap();
        assert_eq!(g.paths(), &[vec![NodeId(0), NodeId(1)]]);
    }

    #[test]
    fn self_cycle_rejected() {
        let err = ProcessingGraph::build(
            vec![node(0).seeded(ClusterId(0)), node(1).seeded(ClusterId(1))],
            vec![FlowEdge::new(0, 0, 1, 1.0), FlowEdge::new(1, 1, 1, 1.0)],
            co_and_site(),
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::SelfCycle {
                edge: EdgeId(1),
                node: NodeId(1)
            }
        );
    }

    #[test]
    fn dangling_references_rejected() {
        let err = ProcessingGraph::build(
            vec![node(0).seeded(ClusterId(0))],
            vec![FlowEdge::new(0, 0, 3, 1.0)],
            co_and_site(),
        )
        .unwrap_err();
        assert_eq!(err, Error::DanglingReference("node", 3));

        let err = ProcessingGraph::build(vec![node(0).seeded(ClusterId(7))], vec![], co_and_site())
            .unwrap_err();
        assert_eq!(err, Error::DanglingReference("cluster", 7));

        let err = ProcessingGraph::build(vec![node(1)], vec![], co_and_site()).unwrap_err();
        assert_eq!(err, Error::DanglingReference("node", 1));
    }

    #[test]
    fn unseeded_terminal_rejected() {
        let err = ProcessingGraph::build(
            vec![node(0).seeded(ClusterId(0)), node(1), node(2)],
            vec![FlowEdge::new(0, 0, 1, 1.0), FlowEdge::new(1, 1, 2, 1.0)],
            co_and_site(),
        )
        .unwrap_err();
        assert_eq!(err, Error::UnseededTerminal(NodeId(2)));
    }

    #[test]
    fn negative_weights_rejected() {
        let mut bad = node(0);
        bad.complexity = -1.0;
        assert_eq!(
            ProcessingGraph::build(vec![bad], vec![], co_and_site()).unwrap_err(),
            Error::InvalidWeight("node", 0)
        );
        let err = ProcessingGraph::build(
            vec![node(0).seeded(ClusterId(0)), node(1).seeded(ClusterId(1))],
            vec![FlowEdge::new(0, 0, 1, f64::NAN)],
            co_and_site(),
        )
        .unwrap_err();
        assert_eq!(err, Error::InvalidWeight("edge", 0));
    }

    fn chain_and_diamond() -> ProcessingGraph {
        // 0 -> 1 -> 2 and diamond 3 -> {4, 5} -> 6
        let nodes = vec![
            node(0).seeded(ClusterId(1)),
            node(1),
            node(2).seeded(ClusterId(0)),
            node(3).seeded(ClusterId(1)),
            node(4),
            node(5),
            node(6).seeded(ClusterId(0)),
        ];
        let edges = vec![
            FlowEdge::new(0, 0, 1, 1.0),
            FlowEdge::new(1, 1, 2, 1.0),
            FlowEdge::new(2, 3, 5, 1.0),
            FlowEdge::new(3, 3, 4, 1.0),
            FlowEdge::new(4, 4, 6, 1.0),
            FlowEdge::new(5, 5, 6, 1.0),
        ];
        ProcessingGraph::build(nodes, edges, co_and_site()).unwrap()
    }

    #[test]
    fn paths_of_chain_and_diamond() {
        let g = chain_and_diamond();
        let ids = |v: &[usize]| v.iter().map(|&i| NodeId(i)).collect::<Vec<_>>();
        assert_eq!(
            g.paths(),
            &[ids(&[0, 1, 2]), ids(&[3, 4, 6]), ids(&[3, 5, 6])]
        );
    }

    #[test]
    fn path_cap_is_an_error() {
        let g = chain_and_diamond();
        assert_eq!(enumerate_paths(&g, 3).unwrap().len(), 3);
        assert_eq!(
            enumerate_paths(&g, 2).unwrap_err(),
            Error::PathExplosion { cap: 2 }
        );
    }

    #[test]
    fn comp_links_are_not_traversed() {
        // Two chains joined by a CoMP pair; without the flag the pair would form a cycle.
        let nodes = vec![
            node(0).seeded(ClusterId(1)),
            node(1),
            node(2).seeded(ClusterId(0)),
            node(3).seeded(ClusterId(1)),
            node(4),
            node(5).seeded(ClusterId(0)),
        ];
        let edges = vec![
            FlowEdge::new(0, 0, 1, 1.0),
            FlowEdge::new(1, 1, 2, 1.0),
            FlowEdge::new(2, 3, 4, 1.0),
            FlowEdge::new(3, 4, 5, 1.0),
            FlowEdge::new(4, 1, 4, 0.45).comp(),
            FlowEdge::new(5, 4, 1, 0.45).comp(),
        ];
        let g = ProcessingGraph::build(nodes, edges, co_and_site()).unwrap();
        assert_eq!(g.paths().len(), 2);
        assert!(g.is_connected(NodeId(1), NodeId(4)));
    }

    #[test]
    fn neighbors_ignore_direction() {
        let g = chain_and_diamond();
        assert_eq!(g.neighbors(NodeId(1)), &[NodeId(0), NodeId(2)]);
        assert_eq!(g.neighbors(NodeId(6)), &[NodeId(4), NodeId(5)]);
    }

    #[test]
    fn isolated_node_has_no_neighbors_and_no_path() {
        let g = ProcessingGraph::build(vec![node(0)], vec![], co_and_site()).unwrap();
        assert!(g.neighbors(NodeId(0)).is_empty());
        assert!(g.paths().is_empty());
    }

    #[test]
    fn connection_matrix_symmetric_with_false_diagonal() {
        let g = chain_and_diamond();
        for i in 0..g.node_count() {
            assert!(!g.is_connected(NodeId(i), NodeId(i)));
            for j in 0..g.node_count() {
                assert_eq!(
                    g.is_connected(NodeId(i), NodeId(j)),
                    g.is_connected(NodeId(j), NodeId(i))
                );
            }
        }
    }

    #[test]
    fn node_kind_names_round_trip() {
        for kind in NodeKind::BUILTIN.iter() {
            assert_eq!(&kind.as_str().parse::<NodeKind>().unwrap(), kind);
        }
        assert_eq!(
            "turbo".parse::<NodeKind>().unwrap(),
            NodeKind::Custom("turbo".into())
        );
    }
}
