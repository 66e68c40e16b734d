//! JSON documents printed by `solve` and `oracle`.

use bbsplit_core::cost::{ClusteringScheme, CostBreakdown, FitnessParams};
use bbsplit_core::ProcessingGraph;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct BreakdownDoc {
    pub comp_total: f64,
    pub fh_total: f64,
    pub comp_scaled: f64,
    pub fh_scaled: f64,
    pub penalty: f64,
    pub fitness: f64,
    pub max_path_delay: f64,
    pub path_delays: Vec<f64>,
}

impl From<&CostBreakdown> for BreakdownDoc {
    fn from(b: &CostBreakdown) -> Self {
        BreakdownDoc {
            comp_total: b.comp_total,
            fh_total: b.fh_total,
            comp_scaled: b.comp_scaled,
            fh_scaled: b.fh_scaled,
            penalty: b.penalty,
            fitness: b.fitness,
            max_path_delay: b.max_path_delay(),
            path_delays: b.path_delays.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Placement {
    pub node: usize,
    pub label: String,
    pub cluster: usize,
    pub cluster_label: String,
}

pub fn placements(graph: &ProcessingGraph, scheme: &ClusteringScheme) -> Vec<Placement> {
    graph
        .nodes()
        .iter()
        .map(|n| {
            let c = scheme.cluster_of(n.id);
            Placement {
                node: n.id.0,
                label: n.label.clone(),
                cluster: c.0,
                cluster_label: graph.cluster(c).label.clone(),
            }
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct Settings {
    pub alpha: f64,
    pub beta: f64,
    pub delay_bound: f64,
    pub comp_norm: f64,
    pub fh_norm: f64,
}

impl Settings {
    pub fn new(params: &FitnessParams, delay_bound: f64) -> Self {
        Settings {
            alpha: params.alpha,
            beta: params.beta,
            delay_bound,
            comp_norm: params.comp_norm,
            fh_norm: params.fh_norm,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SolveReport {
    pub method: &'static str,
    pub settings: Settings,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generations_run: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evaluated: Option<u128>,
    pub breakdown: BreakdownDoc,
    pub assignment: Vec<Placement>,
}

impl SolveReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}
