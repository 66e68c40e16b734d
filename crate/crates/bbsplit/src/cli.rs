//! Command-line interface.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use bbsplit_core::cost::{CostProfile, FitnessParams};
use bbsplit_core::ga::{run_ga, GaConfig};
use bbsplit_core::oracle::{exhaustive_optimum, OracleOptions, DEFAULT_SEARCH_CAP};
use bbsplit_core::scenario::{build_scenario, NodeTypeTable, ScenarioSpec};
use bbsplit_core::ProcessingGraph;
use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::experiments::{self, RunSettings};
use crate::format;
use crate::report::{placements, Settings, SolveReport};

#[derive(Debug, Parser)]
#[command(name = "bbsplit", version, about = "Place baseband functions between cell sites and a central office")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one GA optimization and print the best placement as JSON.
    Solve(SolveArgs),
    /// Sweep the tradeoff coefficient and write CSV results.
    SweepAlpha(SweepAlphaArgs),
    /// Sweep the path delay bound and write CSV results.
    SweepDelay(SweepDelayArgs),
    /// Compare placements with and without CoMP links.
    CompareComp(CompareArgs),
    /// Exhaustive search for the optimum placement of a small scenario.
    Oracle(OracleArgs),
    /// Write a generated scenario file.
    GenScenario(GenArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ScenarioArgs {
    /// Cells in the generated scenario.
    #[arg(long, default_value_t = 2)]
    pub cells: usize,
    /// Processing chains per direction and cell.
    #[arg(long, default_value_t = 2)]
    pub chains: usize,
    /// Add CoMP links between neighboring cells.
    #[arg(long)]
    pub comp: bool,
    /// Multiplier on every link weight.
    #[arg(long, default_value_t = 1.0)]
    pub link_scale: f64,
}

impl ScenarioArgs {
    pub fn spec(&self) -> ScenarioSpec {
        ScenarioSpec {
            n_cells: self.cells,
            chains_per_direction: self.chains,
            comp_enabled: self.comp,
            link_scale: self.link_scale,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Source {
    /// Scenario file; without it a scenario is generated from --cells/--chains/--comp.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[command(flatten)]
    pub generated: ScenarioArgs,
}

impl Source {
    fn validate(&self) -> Result<()> {
        if self.scenario.is_none() {
            self.generated.spec().validate()?;
        }
        Ok(())
    }

    fn load(&self) -> Result<ProcessingGraph> {
        match &self.scenario {
            Some(path) => format::read_graph(path),
            None => Ok(build_scenario(&self.generated.spec(), &NodeTypeTable::default())?),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GaArgs {
    #[arg(long, default_value_t = 20)]
    pub population: usize,
    #[arg(long, default_value_t = 500)]
    pub generations: usize,
    #[arg(long, default_value_t = 100)]
    pub stall: usize,
    #[arg(long, default_value_t = 0.4)]
    pub mutation_prob: f64,
    #[arg(long, default_value_t = 1)]
    pub elitism: usize,
    /// Delay penalty factor.
    #[arg(long, default_value_t = FitnessParams::DEFAULT_BETA)]
    pub beta: f64,
    #[arg(long, default_value_t = 0)]
    pub master_seed: u64,
}

impl GaArgs {
    fn settings(&self) -> RunSettings {
        RunSettings {
            profile: CostProfile::default(),
            beta: self.beta,
            ga: GaConfig {
                population_size: self.population,
                mutation_prob: self.mutation_prob,
                max_generations: self.generations,
                stall_generations: self.stall,
                elitism: self.elitism,
                rng_seed: self.master_seed,
            },
        }
    }

    fn validate(&self) -> Result<()> {
        self.settings().ga.validate()?;
        check_beta(self.beta)
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    #[arg(long, default_value_t = FitnessParams::DEFAULT_DELAY_BOUND)]
    pub delay_bound: f64,
    #[command(flatten)]
    pub ga: GaArgs,
    /// Write the JSON result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    #[arg(long, default_value_t = FitnessParams::DEFAULT_DELAY_BOUND)]
    pub delay_bound: f64,
    #[arg(long, default_value_t = FitnessParams::DEFAULT_BETA)]
    pub beta: f64,
    /// Largest search space to enumerate.
    #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
    pub cap: u128,
    /// Only try the seed clusters of each node's connected component.
    #[arg(long)]
    pub restrict: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepAlphaArgs {
    #[command(flatten)]
    pub source: Source,
    /// Comma-separated tradeoff coefficients; default 30 points in [0.01, 0.3].
    #[arg(long, value_delimiter = ',')]
    pub alphas: Vec<f64>,
    #[arg(long, default_value_t = FitnessParams::DEFAULT_DELAY_BOUND)]
    pub delay_bound: f64,
    #[arg(long, default_value_t = experiments::DEFAULT_RUNS)]
    pub runs: usize,
    #[command(flatten)]
    pub ga: GaArgs,
    /// Output directory.
    #[arg(long, default_value = "sweep-alpha")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepDelayArgs {
    #[command(flatten)]
    pub source: Source,
    /// Comma-separated delay bounds; default 1..20.
    #[arg(long, value_delimiter = ',')]
    pub delays: Vec<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    #[arg(long, default_value_t = experiments::DEFAULT_RUNS)]
    pub runs: usize,
    #[command(flatten)]
    pub ga: GaArgs,
    #[arg(long, default_value = "sweep-delay")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = FitnessParams::DEFAULT_DELAY_BOUND)]
    pub delay_bound: f64,
    #[arg(long, default_value_t = experiments::DEFAULT_RUNS)]
    pub runs: usize,
    #[command(flatten)]
    pub ga: GaArgs,
    #[arg(long, default_value = "compare-comp")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Destination file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::Invalid(format!("alpha {alpha} outside [0, 1]")))
    }
}

fn check_delay(delay: f64) -> Result<()> {
    if delay > 0.0 {
        Ok(())
    } else {
        Err(Error::Invalid(format!("delay bound {delay} must be positive")))
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 1.0 {
        Ok(())
    } else {
        Err(Error::Invalid(format!("beta {beta} must be > 1")))
    }
}

fn check_runs(runs: usize) -> Result<()> {
    if runs >= 1 {
        Ok(())
    } else {
        Err(Error::Invalid("runs must be at least 1".into()))
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| Error::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

pub fn solve(args: &SolveArgs) -> Result<String> {
    check_alpha(args.alpha)?;
    check_delay(args.delay_bound)?;
    args.ga.validate()?;
    args.source.validate()?;
    let graph = args.source.load()?;
    let settings = args.ga.settings();
    let params = FitnessParams::new(&graph, &settings.profile, args.alpha, args.ga.beta, args.delay_bound)?;
    let result = run_ga(&graph, &settings.profile, &params, &settings.ga)?;
    Ok(SolveReport {
        method: "ga",
        settings: Settings::new(&params, args.delay_bound),
        rng_seed: Some(settings.ga.rng_seed),
        generations_run: Some(result.generations_run),
        converged: Some(result.converged),
        evaluated: None,
        breakdown: (&result.best.breakdown).into(),
        assignment: placements(&graph, &result.best.scheme),
    }
    .to_json())
}

pub fn oracle(args: &OracleArgs) -> Result<String> {
    check_alpha(args.alpha)?;
    check_delay(args.delay_bound)?;
    check_beta(args.beta)?;
    args.source.validate()?;
    let graph = args.source.load()?;
    let profile = CostProfile::default();
    let params = FitnessParams::new(&graph, &profile, args.alpha, args.beta, args.delay_bound)?;
    let options = OracleOptions {
        cap: args.cap,
        restrict_to_component_seeds: args.restrict,
    };
    let result = exhaustive_optimum(&graph, &profile, &params, &options)?;
    Ok(SolveReport {
        method: "exhaustive",
        settings: Settings::new(&params, args.delay_bound),
        rng_seed: None,
        generations_run: None,
        converged: None,
        evaluated: Some(result.evaluated),
        breakdown: (&result.breakdown).into(),
        assignment: placements(&graph, &result.scheme),
    }
    .to_json())
}

pub fn sweep_alpha(args: &SweepAlphaArgs) -> Result<experiments::SweepOutput> {
    let alphas = if args.alphas.is_empty() {
        experiments::default_alpha_grid()
    } else {
        args.alphas.clone()
    };
    alphas.iter().try_for_each(|&a| check_alpha(a))?;
    check_delay(args.delay_bound)?;
    check_runs(args.runs)?;
    args.ga.validate()?;
    args.source.validate()?;
    let graph = args.source.load()?;
    let out = experiments::sweep_alpha(
        &graph,
        &alphas,
        args.delay_bound,
        args.runs,
        args.ga.master_seed,
        &args.ga.settings(),
    )?;
    experiments::write_sweep(&args.out, &out)?;
    Ok(out)
}

pub fn sweep_delay(args: &SweepDelayArgs) -> Result<experiments::SweepOutput> {
    let delays = if args.delays.is_empty() {
        experiments::default_delay_grid()
    } else {
        args.delays.clone()
    };
    delays.iter().try_for_each(|&d| check_delay(d))?;
    check_alpha(args.alpha)?;
    check_runs(args.runs)?;
    args.ga.validate()?;
    args.source.validate()?;
    let graph = args.source.load()?;
    let out = experiments::sweep_delay(
        &graph,
        &delays,
        args.alpha,
        args.runs,
        args.ga.master_seed,
        &args.ga.settings(),
    )?;
    experiments::write_sweep(&args.out, &out)?;
    Ok(out)
}

pub fn compare_comp(args: &CompareArgs) -> Result<experiments::Comparison> {
    check_alpha(args.alpha)?;
    check_delay(args.delay_bound)?;
    check_runs(args.runs)?;
    args.ga.validate()?;
    args.scenario.spec().validate()?;
    let cmp = experiments::compare_comp(
        &args.scenario.spec(),
        &NodeTypeTable::default(),
        args.alpha,
        args.delay_bound,
        args.runs,
        args.ga.master_seed,
        &args.ga.settings(),
    )?;
    experiments::write_comparison(&args.out, &cmp)?;
    Ok(cmp)
}

pub fn gen_scenario(args: &GenArgs) -> Result<String> {
    let spec = args.scenario.spec();
    spec.validate()?;
    let graph = build_scenario(&spec, &NodeTypeTable::default())?;
    Ok(format::graph_to_json(&graph))
}

fn summary_line(s: &experiments::PointSummary) -> String {
    format!(
        "{} alpha={} D={} comp={:.4} fh={:.4} centralized={:.3}\n",
        s.experiment_id, s.alpha, s.delay_bound, s.mean_comp_total, s.mean_fh_total, s.mean_centralized_fraction
    )
}

/// Executes a parsed command; progress summaries go to stdout.
pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Solve(args) => emit(args.out.as_deref(), &solve(args)?),
        Command::Oracle(args) => emit(args.out.as_deref(), &oracle(args)?),
        Command::GenScenario(args) => emit(args.out.as_deref(), &gen_scenario(args)?),
        Command::SweepAlpha(args) => {
            let out = sweep_alpha(args)?;
            let text: String = out.summary.iter().map(summary_line).collect();
            emit(None, &text)
        }
        Command::SweepDelay(args) => {
            let out = sweep_delay(args)?;
            let text: String = out.summary.iter().map(summary_line).collect();
            emit(None, &text)
        }
        Command::CompareComp(args) => {
            let cmp = compare_comp(args)?;
            emit(None, &experiments::comparison_json(&cmp))
        }
    }
}
