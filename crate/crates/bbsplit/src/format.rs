//! JSON scenario files.
//!
//! ```json
//! {
//!   "clusters": [{"id": 0, "kind": "central_office", "label": "central-office"}],
//!   "nodes": [{"id": 0, "kind": "sourceDL", "label": "sourceDL.1", "weight": 0.0, "seed_cluster": 0}],
//!   "edges": [{"src": 0, "dst": 1, "weight": 0.03, "comp_link": false}]
//! }
//! ```
//!
//! Node `label`, `seed_cluster` and edge `comp_link` are optional. Unknown
//! keys are rejected. Edge ids are their position in the list.

use std::fs;
use std::path::Path;

use bbsplit_core::{Cluster, ClusterId, ClusterKind, FlowEdge, FunctionNode, NodeKind, ProcessingGraph};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub clusters: Vec<ClusterRecord>,
    pub nodes: Vec<NodeRecord>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterRecord {
    pub id: usize,
    pub kind: String,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeRecord {
    pub id: usize,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_cluster: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub src: usize,
    pub dst: usize,
    pub weight: f64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub comp_link: bool,
}

fn cluster_kind_name(kind: ClusterKind) -> &'static str {
    match kind {
        ClusterKind::CellSite => "cell_site",
        ClusterKind::CentralOffice => "central_office",
    }
}

fn parse_cluster_kind(name: &str) -> Result<ClusterKind> {
    match name {
        "cell_site" => Ok(ClusterKind::CellSite),
        "central_office" => Ok(ClusterKind::CentralOffice),
        other => Err(Error::UnknownKind {
            what: "cluster",
            value: other.to_string(),
        }),
    }
}

impl ScenarioFile {
    pub fn from_graph(graph: &ProcessingGraph) -> Self {
        ScenarioFile {
            clusters: graph
                .clusters()
                .iter()
                .map(|c| ClusterRecord {
                    id: c.id.0,
                    kind: cluster_kind_name(c.kind).to_string(),
                    label: c.label.clone(),
                })
                .collect(),
            nodes: graph
                .nodes()
                .iter()
                .map(|n| NodeRecord {
                    id: n.id.0,
                    kind: n.kind.to_string(),
                    label: Some(n.label.clone()),
                    weight: n.complexity,
                    seed_cluster: n.seed_cluster.map(|c| c.0),
                })
                .collect(),
            edges: graph
                .edges()
                .iter()
                .map(|e| EdgeRecord {
                    src: e.src.0,
                    dst: e.dst.0,
                    weight: e.bandwidth,
                    comp_link: e.comp_link,
                })
                .collect(),
        }
    }

    /// Builds and validates the graph. Records may appear in any order but
    /// ids must be dense.
    pub fn to_graph(&self) -> Result<ProcessingGraph> {
        let mut clusters = self
            .clusters
            .iter()
            .map(|c| Ok(Cluster::new(c.id, parse_cluster_kind(&c.kind)?, c.label.clone())))
            .collect::<Result<Vec<_>>>()?;
        clusters.sort_by_key(|c| c.id);
        let mut nodes: Vec<FunctionNode> = self
            .nodes
            .iter()
            .map(|n| {
                let kind: NodeKind = n.kind.parse().unwrap_or_else(|e: std::convert::Infallible| match e {});
                let label = n.label.clone().unwrap_or_else(|| format!("{}.{}", n.kind, n.id));
                let mut node = FunctionNode::new(n.id, kind, label, n.weight);
                node.seed_cluster = n.seed_cluster.map(ClusterId);
                node
            })
            .collect();
        nodes.sort_by_key(|n| n.id);
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| FlowEdge {
                comp_link: e.comp_link,
                ..FlowEdge::new(i, e.src, e.dst, e.weight)
            })
            .collect();
        Ok(ProcessingGraph::build(nodes, edges, clusters)?)
    }
}

pub fn parse_graph(text: &str) -> Result<ProcessingGraph> {
    serde_json::from_str::<ScenarioFile>(text)?.to_graph()
}

pub fn read_graph(path: &Path) -> Result<ProcessingGraph> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let file: ScenarioFile = serde_json::from_str(&text).map_err(|source| Error::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    file.to_graph()
}

pub fn graph_to_json(graph: &ProcessingGraph) -> String {
    let mut text = serde_json::to_string_pretty(&ScenarioFile::from_graph(graph))
        .expect("scenario records always serialize");
    text.push('\n');
    text
}

pub fn write_graph(graph: &ProcessingGraph, path: &Path) -> Result<()> {
    fs::write(path, graph_to_json(graph)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
