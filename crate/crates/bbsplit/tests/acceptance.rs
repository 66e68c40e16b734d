//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero when any criterion fails.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use bbsplit::experiments::{self, RunSettings, COMP_LABEL, NO_COMP_LABEL};
use bbsplit::stats::{mean, spearman};
use bbsplit_core::cost::{
    all_centralized, computational_cost, evaluate, fronthauling_cost, path_delay,
};
use bbsplit_core::ga::{
    allowed_mutation_set, dispersive_crossover, graph_based_init, graph_based_mutation, run_ga,
};
use bbsplit_core::oracle::{exhaustive_optimum, OracleOptions};
use bbsplit_core::scenario::{build_scenario, small_oracle_scenario, NodeTypeTable, ScenarioSpec};
use bbsplit_core::{
    Cluster, ClusterId, ClusterKind, ClusteringScheme, CostProfile, FitnessParams, FlowEdge,
    FunctionNode, GaConfig, NodeKind, PathId, ProcessingGraph,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const MASTER_SEED: u64 = 0;
const TOL: f64 = 1e-9;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn two_cell(comp: bool) -> ProcessingGraph {
    let spec = ScenarioSpec {
        comp_enabled: comp,
        ..ScenarioSpec::default()
    };
    build_scenario(&spec, &NodeTypeTable::default()).unwrap()
}

fn oracle_equivalence() -> Outcome {
    let graph = small_oracle_scenario();
    let profile = CostProfile::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for alpha in [0.05, 0.1, 0.3] {
        let params = FitnessParams::new(&graph, &profile, alpha, 10.0, 30.0).unwrap();
        let best = exhaustive_optimum(&graph, &profile, &params, &OracleOptions::default()).unwrap();
        let hits = (0..10u64)
            .filter(|&seed| {
                let config = GaConfig {
                    rng_seed: experiments::derive_seed(MASTER_SEED, "oracle-check", 0, seed as usize),
                    ..GaConfig::default()
                };
                let ga = run_ga(&graph, &profile, &params, &config).unwrap();
                (ga.best.fitness() - best.breakdown.fitness).abs() <= TOL
            })
            .count();
        pass &= hits >= 9;
        parts.push(format!("alpha={alpha}: {hits}/10"));
    }
    outcome(pass, parts.join(", "))
}

fn tradeoff_and_decode() -> (Outcome, Outcome) {
    let graph = two_cell(false);
    let alphas = experiments::default_alpha_grid();
    let out = experiments::sweep_alpha(
        &graph,
        &alphas,
        30.0,
        experiments::DEFAULT_RUNS,
        MASTER_SEED,
        &RunSettings::default(),
    )
    .unwrap();
    let comp: Vec<f64> = out.summary.iter().map(|s| s.mean_comp_total).collect();
    let fh: Vec<f64> = out.summary.iter().map(|s| s.mean_fh_total).collect();
    let rho_comp = spearman(&comp, &alphas);
    let rho_fh = spearman(&fh, &alphas);
    let tradeoff = outcome(
        rho_comp <= -0.8 && rho_fh >= 0.8,
        format!("rho(comp, alpha)={rho_comp:.3} (need <= -0.8), rho(fh, alpha)={rho_fh:.3} (need >= 0.8)"),
    );

    let co = graph.central_office().unwrap();
    let decodes: Vec<_> = graph
        .nodes()
        .iter()
        .filter(|n| n.kind == NodeKind::Decoding)
        .map(|n| n.id)
        .collect();
    let good = out
        .rows
        .iter()
        .filter(|r| decodes.iter().all(|&d| r.scheme.cluster_of(d) == co))
        .count();
    let worst_alpha = out
        .rows
        .iter()
        .filter(|r| !decodes.iter().all(|&d| r.scheme.cluster_of(d) == co))
        .map(|r| r.alpha)
        .fold(f64::NAN, f64::max);
    let decode = outcome(
        good == out.rows.len(),
        format!(
            "{good}/{} rows with every decode at the central office{}",
            out.rows.len(),
            if worst_alpha.is_nan() {
                String::new()
            } else {
                format!(" (violations up to alpha={worst_alpha:.4})")
            }
        ),
    );
    (tradeoff, decode)
}

fn comp_centralization() -> Outcome {
    let cmp = experiments::compare_comp(
        &ScenarioSpec::default(),
        &NodeTypeTable::default(),
        0.05,
        30.0,
        experiments::DEFAULT_RUNS,
        MASTER_SEED,
        &RunSettings::default(),
    )
    .unwrap();
    let with = cmp.variant(COMP_LABEL).unwrap().mean_centralized_fraction;
    let without = cmp.variant(NO_COMP_LABEL).unwrap().mean_centralized_fraction;
    outcome(
        with - without >= 0.05,
        format!("centralized fraction comp={with:.3}, no-comp={without:.3}, margin={:.3} (need >= 0.05)", with - without),
    )
}

fn delay_effect() -> Outcome {
    let graph = two_cell(false);
    let delays = experiments::default_delay_grid();
    let out = experiments::sweep_delay(
        &graph,
        &delays,
        0.01,
        experiments::DEFAULT_RUNS,
        MASTER_SEED,
        &RunSettings::default(),
    )
    .unwrap();
    let fh: Vec<f64> = out.summary.iter().map(|s| s.mean_fh_total).collect();
    let rho = spearman(&fh, &delays);
    let co = graph.central_office().unwrap();
    let centralized_at = |d: f64| {
        mean(
            out.rows
                .iter()
                .filter(|r| r.delay_bound == d)
                .map(|r| graph.free_nodes().filter(|&v| r.scheme.cluster_of(v) == co).count() as f64),
        )
    };
    let (c1, c20) = (centralized_at(1.0), centralized_at(20.0));
    outcome(
        rho <= -0.6 && c1 >= c20,
        format!("rho(fh, D)={rho:.3} (need <= -0.6), centralized nodes D=1: {c1:.1}, D=20: {c20:.1}"),
    )
}

fn random_scheme(graph: &ProcessingGraph, rng: &mut ChaCha8Rng) -> ClusteringScheme {
    let k = graph.cluster_count();
    ClusteringScheme {
        assignment: graph
            .nodes()
            .iter()
            .map(|n| n.seed_cluster.unwrap_or_else(|| ClusterId(rng.gen_range(0..k))))
            .collect(),
    }
}

fn seeds_hold(graph: &ProcessingGraph, scheme: &ClusteringScheme) -> bool {
    graph
        .nodes()
        .iter()
        .all(|n| n.seed_cluster.is_none_or(|c| scheme.cluster_of(n.id) == c))
}

fn operator_properties() -> Outcome {
    const TRIALS: usize = 10_000;
    let graphs = [small_oracle_scenario(), two_cell(false), two_cell(true)];
    let profile = CostProfile::default();
    let config = GaConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(MASTER_SEED);
    let (mut a, mut b, mut c, mut e) = (0usize, 0usize, 0usize, 0usize);

    for t in 0..TRIALS {
        let graph = &graphs[t % graphs.len()];
        let p1 = graph_based_init(graph, &mut rng).unwrap();
        let p2 = graph_based_init(graph, &mut rng).unwrap();
        let child = dispersive_crossover(graph, &p1, &p2, &mut rng);
        if child
            .assignment
            .iter()
            .zip(p1.assignment.iter().zip(&p2.assignment))
            .all(|(g, (x, y))| g == x || g == y)
        {
            a += 1;
        }
        let before = random_scheme(graph, &mut rng);
        let after = graph_based_mutation(graph, &before, &config, &mut rng);
        if graph.free_nodes().all(|v| {
            after.cluster_of(v) == before.cluster_of(v)
                || allowed_mutation_set(graph, &before, v).unwrap().contains(&after.cluster_of(v))
        }) {
            b += 1;
        }
        if [&p1, &p2, &child, &after].iter().all(|s| seeds_hold(graph, s)) {
            c += 1;
        }
        let bound = rng.gen_range(0.5..40.0);
        let params = FitnessParams::new(graph, &profile, 0.1, 10.0, bound).unwrap();
        let bd = evaluate(graph, &before, &profile, &params);
        let within = bd.path_delays.iter().zip(&params.delay_bounds).all(|(d, lim)| d <= lim);
        if (bd.penalty == 0.0) == within {
            e += 1;
        }
    }

    let graph = small_oracle_scenario();
    let params = FitnessParams::new(&graph, &profile, 0.1, 10.0, 30.0).unwrap();
    let (monotone, steps): (usize, usize) = (0..200u64)
        .into_par_iter()
        .map(|seed| {
            let cfg = GaConfig {
                max_generations: 60,
                rng_seed: seed,
                ..GaConfig::default()
            };
            let ga = run_ga(&graph, &profile, &params, &cfg).unwrap();
            let ok = ga
                .history
                .windows(2)
                .filter(|w| w[1].best_fitness <= w[0].best_fitness)
                .count();
            (ok, ga.history.len() - 1)
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));

    let pass = a == TRIALS && b == TRIALS && c == TRIALS && e == TRIALS && monotone == steps && steps >= TRIALS;
    outcome(
        pass,
        format!(
            "crossover {a}/{TRIALS}, mutation {b}/{TRIALS}, seeds {c}/{TRIALS}, \
             history {monotone}/{steps} generation steps, penalty {e}/{TRIALS}"
        ),
    )
}

fn fixture_graph() -> ProcessingGraph {
    // site 1: radioRX -> fft -> {MIMOrx, MIMOrx}; site 2 mirrors it for a CoMP edge.
    let clusters = vec![
        Cluster::new(0, ClusterKind::CentralOffice, "co"),
        Cluster::new(1, ClusterKind::CellSite, "s1"),
        Cluster::new(2, ClusterKind::CellSite, "s2"),
    ];
    let nodes = vec![
        FunctionNode::new(0, NodeKind::RadioRx, "rx", 0.0).seeded(ClusterId(1)),
        FunctionNode::new(1, NodeKind::Fft, "fft", 1.0),
        FunctionNode::new(2, NodeKind::MimoRx, "m1", 0.5),
        FunctionNode::new(3, NodeKind::MimoRx, "m2", 0.5),
        FunctionNode::new(4, NodeKind::SinkUl, "sink", 0.0).seeded(ClusterId(0)),
        FunctionNode::new(5, NodeKind::RadioRx, "rx2", 0.0).seeded(ClusterId(2)),
        FunctionNode::new(6, NodeKind::MimoRx, "m3", 0.5),
    ];
    let edges = vec![
        FlowEdge::new(0, 0, 1, 1.0),
        FlowEdge::new(1, 1, 2, 0.45),
        FlowEdge::new(2, 1, 3, 0.45),
        FlowEdge::new(3, 2, 4, 0.45),
        FlowEdge::new(4, 3, 4, 0.45),
        FlowEdge::new(5, 5, 6, 0.45),
        FlowEdge::new(6, 6, 4, 0.45),
        FlowEdge::new(7, 2, 6, 0.45).comp(),
    ];
    ProcessingGraph::build(nodes, edges, clusters).unwrap()
}

fn cost_fixtures() -> Outcome {
    let g = fixture_graph();
    let p = CostProfile::default();
    let s = |v: [usize; 7]| ClusteringScheme {
        assignment: v.iter().map(|&c| ClusterId(c)).collect(),
    };
    let mut failures = Vec::new();
    let mut check = |name: &str, got: f64, want: f64| {
        if (got - want).abs() > TOL {
            failures.push(format!("{name}: {got} != {want}"));
        }
    };

    // fft + both MIMOrx at site 1, the CoMP partner at site 2.
    let site = s([1, 1, 1, 1, 0, 2, 2]);
    check("comp site", computational_cost(&g, &site, &p, ClusterId(1)), 4.0);
    check("comp co", computational_cost(&g, &site, &p, ClusterId(0)), 0.0);
    // Only m3 -> sink crosses site 2 / co; the CoMP edge is the only site-site crossing.
    let one = s([1, 1, 1, 1, 0, 2, 2]);
    let fh_s2_co = fronthauling_cost(&g, &one, &p, ClusterId(2), ClusterId(0));
    check("fh site-co", fh_s2_co, 2f64.powf(0.45));
    check("fh site-co value", fh_s2_co, 1.3660402567543954);
    let fh_ss = fronthauling_cost(&g, &one, &p, ClusterId(1), ClusterId(2));
    check("fh site-site", fh_ss, 4f64.powf(0.45));
    check("fh site-site value", fh_ss, 1.8660659830736148);
    let none = s([1, 1, 1, 1, 0, 2, 0]);
    check("fh no crossing", fronthauling_cost(&g, &none, &p, ClusterId(1), ClusterId(2)), 0.0);

    // path rx -> fft -> m1 -> sink: fft contributes 1 * 2, m1 0.5 * 2.
    let path = g
        .paths()
        .iter()
        .position(|q| q.iter().map(|v| v.0).eq([0, 1, 2, 4]))
        .expect("path through m1");
    check("delay fft+mimo", path_delay(&g, &site, &p, PathId(path)), 3.0);
    let lone = s([1, 1, 0, 0, 0, 2, 0]);
    check("delay single node", path_delay(&g, &lone, &p, PathId(path)), 1.0);

    let params = FitnessParams::new(&g, &p, 0.3, 10.0, 30.0).unwrap();
    let central = all_centralized(&g).unwrap();
    let bd = evaluate(&g, &central, &p, &params);
    check("central total delay", bd.path_delays.iter().sum(), 0.0);
    check("central penalty", bd.penalty, 0.0);
    for graph in [small_oracle_scenario(), two_cell(false), two_cell(true)] {
        let params = FitnessParams::new(&graph, &p, 0.3, 10.0, 30.0).unwrap();
        let bd = evaluate(&graph, &all_centralized(&graph).unwrap(), &p, &params);
        check("scenario central delay", bd.path_delays.iter().sum(), 0.0);
    }
    outcome(failures.is_empty(), if failures.is_empty() { "all fixtures within 1e-9".into() } else { failures.join("; ") })
}

fn csv_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = tmp.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_bbsplit"))
            .args(["sweep-alpha", "--alphas", "0.02,0.1,0.25", "--runs", "3", "--master-seed", "42", "--out"])
            .arg(&out)
            .output()
            .unwrap();
        assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
        csv_files(&out)
    };
    let (first, second) = (run("a"), run("b"));
    let bytes: usize = first.iter().map(|f| f.1.len()).sum();
    outcome(
        !first.is_empty() && first == second,
        format!("{} CSV files, {bytes} bytes, identical={}", first.len(), first == second),
    )
}

fn main() -> ExitCode {
    let mut all = true;
    let mut report = |n: usize, name: &str, o: Outcome, secs: f64| {
        all &= o.pass;
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n} {name}: {verdict} [{secs:.1}s] {}", o.detail);
    };
    let timed = |f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let o = f();
        (o, start.elapsed().as_secs_f64())
    };

    let (o, t) = timed(&oracle_equivalence);
    report(1, "oracle equivalence", o, t);
    let start = Instant::now();
    let (tradeoff, decode) = tradeoff_and_decode();
    let t = start.elapsed().as_secs_f64();
    report(2, "tradeoff monotonicity", tradeoff, t);
    report(3, "decode centralization", decode, t);
    let (o, t) = timed(&comp_centralization);
    report(4, "CoMP centralization", o, t);
    let (o, t) = timed(&delay_effect);
    report(5, "delay constraint effect", o, t);
    let (o, t) = timed(&operator_properties);
    report(6, "operator properties", o, t);
    let (o, t) = timed(&cost_fixtures);
    report(7, "cost model fixtures", o, t);
    let (o, t) = timed(&determinism);
    report(8, "determinism", o, t);

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
