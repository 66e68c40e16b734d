//! The simplified LTE-like baseband structure used in the experiments.
//!
//! Each cell has downlink chains
//! `sourceDL -> code -> mod -> MIMOtx -> ifft -> radioTX` and uplink chains
//! `radioRX -> fft -> MIMOrx -> demod -> decode -> sinkUL`, where the
//! per-chain middle stages are replicated `chains_per_direction` times and
//! share the (i)fft and radio nodes. Radio nodes are pinned to their cell
//! site, user-data sources and sinks to the central office. With CoMP enabled,
//! neighboring cells' MIMO nodes are linked in a ring.
//!
//! Cluster 0 is the central office; cluster `c` is the site of cell `c`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::graph::{Cluster, ClusterId, ClusterKind, FlowEdge, FunctionNode, NodeKind, ProcessingGraph};

/// Radio front-end to/from (I)FFT.
pub const RADIO_LINK: f64 = 1.0;
/// Frequency-domain samples per chain: 90% of the radio link (10% cyclic
/// prefix and control overhead) split across two chains.
pub const SAMPLE_LINK: f64 = 0.45;
/// Constellation codewords: 4-bit codewords instead of 30-bit samples.
pub const CODEWORD_LINK: f64 = SAMPLE_LINK * 4.0 / 30.0;
/// Information bits, assuming rate-1/2 channel coding.
pub const INFO_LINK: f64 = CODEWORD_LINK / 2.0;
/// CoMP cross-links carry the same load as the FFT-to-MIMO links.
pub const COMP_LINK: f64 = SAMPLE_LINK;

/// Parameters of a generated scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioSpec {
    pub n_cells: usize,
    pub chains_per_direction: usize,
    pub comp_enabled: bool,
    /// Multiplier applied to every link weight.
    pub link_scale: f64,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        ScenarioSpec {
            n_cells: 2,
            chains_per_direction: 2,
            comp_enabled: false,
            link_scale: 1.0,
        }
    }
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<(), Error> {
        if self.n_cells == 0 {
            return Err(Error::InvalidParameter("n_cells must be at least 1"));
        }
        if self.chains_per_direction == 0 {
            return Err(Error::InvalidParameter("chains_per_direction must be at least 1"));
        }
        if !(self.link_scale.is_finite() && self.link_scale > 0.0) {
            return Err(Error::InvalidParameter("link_scale must be positive"));
        }
        Ok(())
    }
}

/// Complexity weight per node kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeTypeTable {
    weights: [f64; 12],
}

impl Default for NodeTypeTable {
    fn default() -> Self {
        // radioTX radioRX fft ifft MIMOtx MIMOrx mod demod code decode sourceDL sinkUL
        NodeTypeTable {
            weights: [0.0, 0.0, 1.0, 1.0, 0.5, 0.5, 0.1, 0.1, 0.1, 2.0, 0.0, 0.0],
        }
    }
}

impl NodeTypeTable {
    fn slot(kind: &NodeKind) -> Option<usize> {
        NodeKind::BUILTIN.iter().position(|k| k == kind)
    }

    /// Weight of a built-in kind; custom kinds have no table entry.
    pub fn weight(&self, kind: &NodeKind) -> Option<f64> {
        Self::slot(kind).map(|i| self.weights[i])
    }

    pub fn set_weight(&mut self, kind: &NodeKind, weight: f64) -> Result<(), Error> {
        if !(weight.is_finite() && weight >= 0.0) {
            return Err(Error::InvalidParameter("node weight must be non-negative"));
        }
        let slot = Self::slot(kind).ok_or(Error::InvalidParameter("not a built-in node kind"))?;
        self.weights[slot] = weight;
        Ok(())
    }
}

struct Builder<'a> {
    table: &'a NodeTypeTable,
    nodes: Vec<FunctionNode>,
    edges: Vec<FlowEdge>,
    scale: f64,
}

impl Builder<'_> {
    fn node(&mut self, kind: NodeKind, label: alloc::string::String, seed: Option<ClusterId>) -> usize {
        let id = self.nodes.len();
        let weight = self.table.weight(&kind).unwrap_or(0.0);
        let mut node = FunctionNode::new(id, kind, label, weight);
        node.seed_cluster = seed;
        self.nodes.push(node);
        id
    }

    fn edge(&mut self, src: usize, dst: usize, weight: f64, comp: bool) {
        let mut edge = FlowEdge::new(self.edges.len(), src, dst, weight * self.scale);
        edge.comp_link = comp;
        self.edges.push(edge);
    }
}

/// Builds the processing graph for `spec`.
pub fn build_scenario(spec: &ScenarioSpec, table: &NodeTypeTable) -> Result<ProcessingGraph, Error> {
    spec.validate()?;
    let co = ClusterId(0);
    let mut clusters = vec![Cluster::new(0, ClusterKind::CentralOffice, "central-office")];
    let mut b = Builder {
        table,
        nodes: Vec::new(),
        edges: Vec::new(),
        scale: spec.link_scale,
    };
    let chains = spec.chains_per_direction;
    let mut mimo_tx = Vec::with_capacity(spec.n_cells);
    let mut mimo_rx = Vec::with_capacity(spec.n_cells);

    for c in 1..=spec.n_cells {
        let site = ClusterId(c);
        clusters.push(Cluster::new(c, ClusterKind::CellSite, format!("cell-{c}")));

        let source = b.node(NodeKind::SourceDl, format!("sourceDL.{c}"), Some(co));
        let mut tx = Vec::with_capacity(chains);
        for k in 1..=chains {
            let code = b.node(NodeKind::Coding, format!("code.{c}.{k}"), None);
            let modu = b.node(NodeKind::Modulation, format!("mod.{c}.{k}"), None);
            let mimo = b.node(NodeKind::MimoTx, format!("MIMOtx.{c}.{k}"), None);
            b.edge(source, code, INFO_LINK, false);
            b.edge(code, modu, CODEWORD_LINK, false);
            b.edge(modu, mimo, SAMPLE_LINK, false);
            tx.push(mimo);
        }
        let ifft = b.node(NodeKind::Ifft, format!("ifft.{c}"), None);
        let radio_tx = b.node(NodeKind::RadioTx, format!("radioTX.{c}"), Some(site));
        for &mimo in &tx {
            b.edge(mimo, ifft, SAMPLE_LINK, false);
        }
        b.edge(ifft, radio_tx, RADIO_LINK, false);

        let radio_rx = b.node(NodeKind::RadioRx, format!("radioRX.{c}"), Some(site));
        let fft = b.node(NodeKind::Fft, format!("fft.{c}"), None);
        b.edge(radio_rx, fft, RADIO_LINK, false);
        let mut decoders = Vec::with_capacity(chains);
        let mut rx = Vec::with_capacity(chains);
        for k in 1..=chains {
            let mimo = b.node(NodeKind::MimoRx, format!("MIMOrx.{c}.{k}"), None);
            let demod = b.node(NodeKind::Demodulation, format!("demod.{c}.{k}"), None);
            let decode = b.node(NodeKind::Decoding, format!("decode.{c}.{k}"), None);
            b.edge(fft, mimo, SAMPLE_LINK, false);
            b.edge(mimo, demod, SAMPLE_LINK, false);
            b.edge(demod, decode, CODEWORD_LINK, false);
            decoders.push(decode);
            rx.push(mimo);
        }
        let sink = b.node(NodeKind::SinkUl, format!("sinkUL.{c}"), Some(co));
        for decode in decoders {
            b.edge(decode, sink, INFO_LINK, false);
        }
        mimo_tx.push(tx);
        mimo_rx.push(rx);
    }

    if spec.comp_enabled && spec.n_cells >= 2 {
        // DL ring on chain 2 (or the last chain if fewer), UL ring on chain 1.
        let tx_chain = chains.min(2) - 1;
        let n = spec.n_cells;
        for c in 0..n {
            b.edge(mimo_tx[c][tx_chain], mimo_tx[(c + 1) % n][tx_chain], COMP_LINK, true);
        }
        for c in 0..n {
            b.edge(mimo_rx[c][0], mimo_rx[(c + 1) % n][0], COMP_LINK, true);
        }
    }

    ProcessingGraph::build(b.nodes, b.edges, clusters)
}

/// One cell with one chain per direction and no CoMP: 12 nodes of which 8 are
/// free, two clusters, so 256 assignments in total.
pub fn small_oracle_scenario() -> ProcessingGraph {
    let spec = ScenarioSpec {
        n_cells: 1,
        chains_per_direction: 1,
        comp_enabled: false,
        link_scale: 1.0,
    };
    build_scenario(&spec, &NodeTypeTable::default()).expect("fixed scenario is valid")
}
