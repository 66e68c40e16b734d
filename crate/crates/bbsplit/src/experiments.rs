//! Parameter sweeps over the genetic search.
//!
//! Every (grid point, run) pair is an independent GA run seeded from
//! [`derive_seed`], so results depend only on the master seed and never on
//! scheduling. Runs execute in parallel and are merged in
//! (grid index, run index) order.

use std::fs;
use std::path::Path;

use bbsplit_core::cost::{ClusteringScheme, CostProfile, FitnessParams};
use bbsplit_core::ga::{run_ga, GaConfig};
use bbsplit_core::scenario::{build_scenario, NodeTypeTable, ScenarioSpec};
use bbsplit_core::{ClusterKind, NodeId, ProcessingGraph};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::stats::mean;

/// Runs per grid point unless overridden.
pub const DEFAULT_RUNS: usize = 10;

/// 30 evenly spaced tradeoff coefficients in `[0.01, 0.3]`.
pub fn default_alpha_grid() -> Vec<f64> {
    (0..30).map(|i| 0.01 + 0.29 * i as f64 / 29.0).collect()
}

/// Delay bounds 1, 2, ..., 20.
pub fn default_delay_grid() -> Vec<f64> {
    (1..=20).map(f64::from).collect()
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Seed of one GA run. Experiments that share `key` share randomness.
pub fn derive_seed(master: u64, key: &str, grid_index: usize, run_index: usize) -> u64 {
    let mut h = splitmix64(master);
    h = splitmix64(h ^ fnv1a(key));
    h = splitmix64(h ^ grid_index as u64);
    splitmix64(h ^ run_index as u64)
}

/// Everything about a GA run except the point being evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub profile: CostProfile,
    pub beta: f64,
    /// Template; `rng_seed` is replaced per run.
    pub ga: GaConfig,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            profile: CostProfile::default(),
            beta: FitnessParams::DEFAULT_BETA,
            ga: GaConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub alpha: f64,
    pub delay_bound: f64,
}

/// One GA run.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub experiment_id: String,
    pub alpha: f64,
    pub delay_bound: f64,
    pub comp_enabled: bool,
    pub run_index: usize,
    pub rng_seed: u64,
    pub comp_total: f64,
    pub fh_total: f64,
    pub comp_scaled: f64,
    pub fh_scaled: f64,
    pub penalty: f64,
    pub fitness: f64,
    pub max_path_delay: f64,
    pub scheme: ClusteringScheme,
}

/// CSV layout of [`SweepRow`]; the assignment is space-separated cluster ids
/// in node order.
#[derive(Debug, Serialize)]
pub struct SweepRecord<'a> {
    experiment_id: &'a str,
    alpha: f64,
    delay_bound: f64,
    comp_enabled: bool,
    run_index: usize,
    rng_seed: u64,
    comp_total: f64,
    fh_total: f64,
    comp_scaled: f64,
    fh_scaled: f64,
    penalty: f64,
    fitness: f64,
    max_path_delay: f64,
    assignment: String,
}

impl SweepRow {
    pub fn record(&self) -> SweepRecord<'_> {
        SweepRecord {
            experiment_id: &self.experiment_id,
            alpha: self.alpha,
            delay_bound: self.delay_bound,
            comp_enabled: self.comp_enabled,
            run_index: self.run_index,
            rng_seed: self.rng_seed,
            comp_total: self.comp_total,
            fh_total: self.fh_total,
            comp_scaled: self.comp_scaled,
            fh_scaled: self.fh_scaled,
            penalty: self.penalty,
            fitness: self.fitness,
            max_path_delay: self.max_path_delay,
            assignment: self
                .scheme
                .assignment
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        }
    }
}

/// Per grid point averages.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSummary {
    pub experiment_id: String,
    pub alpha: f64,
    pub delay_bound: f64,
    pub comp_enabled: bool,
    pub runs: usize,
    pub mean_comp_total: f64,
    pub mean_fh_total: f64,
    pub mean_comp_scaled: f64,
    pub mean_fh_scaled: f64,
    pub mean_penalty: f64,
    pub mean_fitness: f64,
    /// Mean fraction of free nodes placed at a central office.
    pub mean_centralized_fraction: f64,
}

/// Probability that a free node sits at a cell site, per grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralizationRow {
    pub experiment_id: String,
    pub alpha: f64,
    pub delay_bound: f64,
    pub node_id: usize,
    pub label: String,
    pub kind: String,
    pub cell_site_probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub summary: Vec<PointSummary>,
    pub centralization: Vec<CentralizationRow>,
}

fn at_cell_site(graph: &ProcessingGraph, scheme: &ClusteringScheme, node: NodeId) -> bool {
    graph.cluster(scheme.cluster_of(node)).kind == ClusterKind::CellSite
}

/// Fraction of free nodes placed at a central office.
pub fn centralized_fraction(graph: &ProcessingGraph, scheme: &ClusteringScheme) -> f64 {
    let free: Vec<NodeId> = graph.free_nodes().collect();
    if free.is_empty() {
        return 0.0;
    }
    let central = free
        .iter()
        .filter(|&&v| graph.cluster(scheme.cluster_of(v)).kind == ClusterKind::CentralOffice)
        .count();
    central as f64 / free.len() as f64
}

/// Number of free nodes placed at cell sites.
pub fn cell_site_count(graph: &ProcessingGraph, scheme: &ClusteringScheme) -> usize {
    graph.free_nodes().filter(|&v| at_cell_site(graph, scheme, v)).count()
}

/// Runs the GA `runs` times at every point.
///
/// `seed_key` feeds [`derive_seed`]; `experiment_id` only labels the rows.
#[allow(clippy::too_many_arguments)]
pub fn run_sweep(
    graph: &ProcessingGraph,
    experiment_id: &str,
    seed_key: &str,
    comp_enabled: bool,
    points: &[SweepPoint],
    runs: usize,
    master_seed: u64,
    settings: &RunSettings,
) -> Result<SweepOutput> {
    if runs == 0 {
        return Err(Error::Invalid("runs must be at least 1".into()));
    }
    if points.is_empty() {
        return Err(Error::Invalid("parameter grid is empty".into()));
    }
    settings.ga.validate()?;
    settings.profile.validate()?;
    let base = FitnessParams::new(
        graph,
        &settings.profile,
        points[0].alpha,
        settings.beta,
        points[0].delay_bound,
    )?;
    let params: Vec<FitnessParams> = points
        .iter()
        .map(|p| {
            let params = base.with_alpha(p.alpha).with_delay_bound(p.delay_bound);
            params.validate(graph).map(|()| params)
        })
        .collect::<Result<_, _>>()?;

    let tasks: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|p| (0..runs).map(move |r| (p, r)))
        .collect();
    let rows = tasks
        .par_iter()
        .map(|&(p, run)| {
            let rng_seed = derive_seed(master_seed, seed_key, p, run);
            let config = GaConfig {
                rng_seed,
                ..settings.ga.clone()
            };
            let result = run_ga(graph, &settings.profile, &params[p], &config)?;
            let b = &result.best.breakdown;
            Ok(SweepRow {
                experiment_id: experiment_id.to_string(),
                alpha: points[p].alpha,
                delay_bound: points[p].delay_bound,
                comp_enabled,
                run_index: run,
                rng_seed,
                comp_total: b.comp_total,
                fh_total: b.fh_total,
                comp_scaled: b.comp_scaled,
                fh_scaled: b.fh_scaled,
                penalty: b.penalty,
                fitness: b.fitness,
                max_path_delay: b.max_path_delay(),
                scheme: result.best.scheme,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let summary = rows.chunks(runs).map(|chunk| summarize(graph, chunk)).collect();
    let centralization = rows
        .chunks(runs)
        .flat_map(|chunk| centralization(graph, chunk))
        .collect();
    Ok(SweepOutput {
        rows,
        summary,
        centralization,
    })
}

/// Averages over the runs of one grid point.
pub fn summarize(graph: &ProcessingGraph, rows: &[SweepRow]) -> PointSummary {
    let first = &rows[0];
    PointSummary {
        experiment_id: first.experiment_id.clone(),
        alpha: first.alpha,
        delay_bound: first.delay_bound,
        comp_enabled: first.comp_enabled,
        runs: rows.len(),
        mean_comp_total: mean(rows.iter().map(|r| r.comp_total)),
        mean_fh_total: mean(rows.iter().map(|r| r.fh_total)),
        mean_comp_scaled: mean(rows.iter().map(|r| r.comp_scaled)),
        mean_fh_scaled: mean(rows.iter().map(|r| r.fh_scaled)),
        mean_penalty: mean(rows.iter().map(|r| r.penalty)),
        mean_fitness: mean(rows.iter().map(|r| r.fitness)),
        mean_centralized_fraction: mean(rows.iter().map(|r| centralized_fraction(graph, &r.scheme))),
    }
}

/// Cell-site probability of every free node over the runs of one grid point.
pub fn centralization(graph: &ProcessingGraph, rows: &[SweepRow]) -> Vec<CentralizationRow> {
    let first = &rows[0];
    graph
        .free_nodes()
        .map(|v| {
            let at_site = rows.iter().filter(|r| at_cell_site(graph, &r.scheme, v)).count();
            let node = graph.node(v);
            CentralizationRow {
                experiment_id: first.experiment_id.clone(),
                alpha: first.alpha,
                delay_bound: first.delay_bound,
                node_id: v.0,
                label: node.label.clone(),
                kind: node.kind.to_string(),
                cell_site_probability: at_site as f64 / rows.len() as f64,
            }
        })
        .collect()
}

pub fn sweep_alpha(
    graph: &ProcessingGraph,
    alphas: &[f64],
    delay_bound: f64,
    runs: usize,
    master_seed: u64,
    settings: &RunSettings,
) -> Result<SweepOutput> {
    let points: Vec<SweepPoint> = alphas
        .iter()
        .map(|&alpha| SweepPoint { alpha, delay_bound })
        .collect();
    let comp = graph.edges().iter().any(|e| e.comp_link);
    run_sweep(graph, "sweep-alpha", "sweep-alpha", comp, &points, runs, master_seed, settings)
}

pub fn sweep_delay(
    graph: &ProcessingGraph,
    delays: &[f64],
    alpha: f64,
    runs: usize,
    master_seed: u64,
    settings: &RunSettings,
) -> Result<SweepOutput> {
    let points: Vec<SweepPoint> = delays
        .iter()
        .map(|&delay_bound| SweepPoint { alpha, delay_bound })
        .collect();
    let comp = graph.edges().iter().any(|e| e.comp_link);
    run_sweep(graph, "sweep-delay", "sweep-delay", comp, &points, runs, master_seed, settings)
}

pub const COMP_LABEL: &str = "comp";
pub const NO_COMP_LABEL: &str = "no-comp";

/// Results of one variant of the CoMP comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Variant {
    pub label: &'static str,
    pub output: SweepOutput,
    pub mean_centralized_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub alpha: f64,
    pub delay_bound: f64,
    pub runs: usize,
    /// Non-CoMP first, then CoMP.
    pub variants: [Variant; 2],
}

impl Comparison {
    pub fn variant(&self, label: &str) -> Option<&Variant> {
        self.variants.iter().find(|v| v.label == label)
    }
}

/// Same scenario with and without CoMP links, same seeds for both.
pub fn compare_comp(
    spec: &ScenarioSpec,
    table: &NodeTypeTable,
    alpha: f64,
    delay_bound: f64,
    runs: usize,
    master_seed: u64,
    settings: &RunSettings,
) -> Result<Comparison> {
    let point = [SweepPoint { alpha, delay_bound }];
    let variant = |label: &'static str, comp: bool| -> Result<Variant> {
        let graph = build_scenario(
            &ScenarioSpec {
                comp_enabled: comp,
                ..*spec
            },
            table,
        )?;
        let id = format!("compare-comp/{label}");
        let output = run_sweep(&graph, &id, "compare-comp", comp, &point, runs, master_seed, settings)?;
        let mean_centralized_fraction = output.summary[0].mean_centralized_fraction;
        Ok(Variant {
            label,
            output,
            mean_centralized_fraction,
        })
    };
    Ok(Comparison {
        alpha,
        delay_bound,
        runs,
        variants: [variant(NO_COMP_LABEL, false)?, variant(COMP_LABEL, true)?],
    })
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(csv::Writer::from_writer(file))
}

pub fn write_rows<'a>(path: &Path, rows: impl IntoIterator<Item = &'a SweepRow>) -> Result<()> {
    let mut w = csv_writer(path)?;
    for row in rows {
        w.serialize(row.record())?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_records<'a, T: Serialize + 'a>(path: &Path, records: impl IntoIterator<Item = &'a T>) -> Result<()> {
    let mut w = csv_writer(path)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `rows.csv`, `summary.csv` and `centralization.csv` into `dir`.
pub fn write_sweep(dir: &Path, output: &SweepOutput) -> Result<()> {
    create_dir(dir)?;
    write_rows(&dir.join("rows.csv"), &output.rows)?;
    write_records(&dir.join("summary.csv"), &output.summary)?;
    write_records(&dir.join("centralization.csv"), &output.centralization)
}

#[derive(Serialize)]
struct VariantSummary<'a> {
    label: &'a str,
    mean_centralized_fraction: f64,
    summary: &'a PointSummary,
}

#[derive(Serialize)]
struct ComparisonSummary<'a> {
    alpha: f64,
    delay_bound: f64,
    runs: usize,
    variants: Vec<VariantSummary<'a>>,
}

pub fn comparison_json(cmp: &Comparison) -> String {
    let doc = ComparisonSummary {
        alpha: cmp.alpha,
        delay_bound: cmp.delay_bound,
        runs: cmp.runs,
        variants: cmp
            .variants
            .iter()
            .map(|v| VariantSummary {
                label: v.label,
                mean_centralized_fraction: v.mean_centralized_fraction,
                summary: &v.output.summary[0],
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("summary serializes");
    text.push('\n');
    text
}

/// Writes both variants' rows and centralization stats (keyed by
/// `experiment_id`) plus `summary.json` into `dir`.
pub fn write_comparison(dir: &Path, cmp: &Comparison) -> Result<()> {
    create_dir(dir)?;
    write_rows(
        &dir.join("rows.csv"),
        cmp.variants.iter().flat_map(|v| &v.output.rows),
    )?;
    write_records(
        &dir.join("centralization.csv"),
        cmp.variants.iter().flat_map(|v| &v.output.centralization),
    )?;
    write_records(
        &dir.join("summary.csv"),
        cmp.variants.iter().flat_map(|v| &v.output.summary),
    )?;
    write_text(&dir.join("summary.json"), &comparison_json(cmp))
}
