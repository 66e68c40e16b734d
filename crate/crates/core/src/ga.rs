//! Genetic search over clustering schemes.
//!
//! Chromosomes are the assignment vectors themselves, with seed positions
//! frozen. Initialization and mutation only ever move a node into a cluster
//! that already hosts one of its graph neighbors, so offspring stay
//! connected to their seeds.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cost::{evaluate, ClusteringScheme, CostBreakdown, CostProfile, FitnessParams};
use crate::error::Error;
use crate::graph::{ClusterId, NodeId, ProcessingGraph};

/// Smallest best-fitness decrease that resets the stall counter.
pub const IMPROVEMENT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    /// Per-gene mutation probability.
    pub mutation_prob: f64,
    pub max_generations: usize,
    /// Stop after this many generations without improvement of the best fitness.
    pub stall_generations: usize,
    /// Number of best individuals copied unchanged into the next generation.
    pub elitism: usize,
    pub rng_seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 20,
            mutation_prob: 0.4,
            max_generations: 500,
            stall_generations: 100,
            elitism: 1,
            rng_seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.population_size < 2 {
            return Err(Error::InvalidParameter("population_size must be at least 2"));
        }
        if !(0.0..=1.0).contains(&self.mutation_prob) {
            return Err(Error::InvalidParameter("mutation_prob must lie in [0, 1]"));
        }
        if self.max_generations == 0 {
            return Err(Error::InvalidParameter("max_generations must be positive"));
        }
        if self.stall_generations == 0 {
            return Err(Error::InvalidParameter("stall_generations must be positive"));
        }
        if self.elitism >= self.population_size {
            return Err(Error::InvalidParameter("elitism must be below population_size"));
        }
        Ok(())
    }
}

/// A scheme together with its cached evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub scheme: ClusteringScheme,
    pub breakdown: CostBreakdown,
}

impl Individual {
    pub fn fitness(&self) -> f64 {
        self.breakdown.fitness
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationStats {
    pub best_fitness: f64,
    pub mean_fitness: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaResult {
    /// Best individual ever evaluated.
    pub best: Individual,
    /// One entry per evaluated generation.
    pub history: Vec<GenerationStats>,
    pub generations_run: usize,
    /// True when the run stopped on the stall criterion.
    pub converged: bool,
}

/// Clusters currently hosting a neighbor of `node`, ascending.
pub fn allowed_mutation_set(
    graph: &ProcessingGraph,
    scheme: &ClusteringScheme,
    node: NodeId,
) -> Result<Vec<ClusterId>, Error> {
    if graph.node(node).is_seed() {
        return Err(Error::SeedMutation(node));
    }
    let mut set: Vec<ClusterId> = graph
        .neighbors(node)
        .iter()
        .map(|&j| scheme.cluster_of(j))
        .collect();
    set.sort_unstable();
    set.dedup();
    Ok(set)
}

/// Random initial scheme grown outwards from the seeds.
///
/// Nodes are visited layer by layer in breadth-first order from all seeds.
/// Each node picks uniformly among the distinct clusters of its neighbors in
/// earlier layers.
pub fn graph_based_init<R: Rng + ?Sized>(
    graph: &ProcessingGraph,
    rng: &mut R,
) -> Result<ClusteringScheme, Error> {
    let n = graph.node_count();
    let mut assigned: Vec<Option<ClusterId>> = graph.nodes().iter().map(|v| v.seed_cluster).collect();
    let mut frontier: Vec<NodeId> = graph.nodes().iter().filter(|v| v.is_seed()).map(|v| v.id).collect();
    let mut queued = vec![false; n];
    let mut candidates = Vec::new();
    while !frontier.is_empty() {
        let mut layer: Vec<NodeId> = Vec::new();
        for &v in &frontier {
            for &w in graph.neighbors(v) {
                if assigned[w.0].is_none() && !queued[w.0] {
                    queued[w.0] = true;
                    layer.push(w);
                }
            }
        }
        layer.sort_unstable();
        let picks: Vec<ClusterId> = layer
            .iter()
            .map(|&w| {
                candidates.clear();
                candidates.extend(graph.neighbors(w).iter().filter_map(|&u| assigned[u.0]));
                candidates.sort_unstable();
                candidates.dedup();
                candidates[rng.gen_range(0..candidates.len())]
            })
            .collect();
        for (&w, c) in layer.iter().zip(picks) {
            assigned[w.0] = Some(c);
        }
        frontier = layer;
    }
    let assignment = assigned
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or(Error::UnreachableNode(NodeId(i))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ClusteringScheme { assignment })
}

/// Roulette-wheel index for a minimized objective. Slot `i` has width
/// `worst - f_i + eps` with `eps = 1e-9 * (worst - best + 1)`.
pub fn roulette_index<R: Rng + ?Sized>(fitnesses: &[f64], rng: &mut R) -> usize {
    assert!(!fitnesses.is_empty(), "roulette over an empty population");
    if fitnesses.len() == 1 {
        return 0;
    }
    let worst = fitnesses.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let best = fitnesses.iter().copied().fold(f64::INFINITY, f64::min);
    let eps = 1e-9 * (worst - best + 1.0);
    let total: f64 = fitnesses.iter().map(|f| worst - f + eps).sum();
    let mut ticket = rng.gen::<f64>() * total;
    for (i, f) in fitnesses.iter().enumerate() {
        let width = worst - f + eps;
        if ticket < width {
            return i;
        }
        ticket -= width;
    }
    // Rounding can leave the ticket just past the last slot.
    fitnesses.len() - 1
}

pub fn roulette_select<'a, R: Rng + ?Sized>(population: &'a [Individual], rng: &mut R) -> &'a Individual {
    let fitnesses: Vec<f64> = population.iter().map(Individual::fitness).collect();
    &population[roulette_index(&fitnesses, rng)]
}

/// Uniform crossover: every free gene comes from either parent with
/// probability 1/2. Seed genes are taken from the graph.
pub fn dispersive_crossover<R: Rng + ?Sized>(
    graph: &ProcessingGraph,
    parent_a: &ClusteringScheme,
    parent_b: &ClusteringScheme,
    rng: &mut R,
) -> ClusteringScheme {
    let assignment = graph
        .nodes()
        .iter()
        .zip(parent_a.assignment.iter().zip(&parent_b.assignment))
        .map(|(node, (&a, &b))| match node.seed_cluster {
            Some(seed) => seed,
            None => {
                if rng.gen_bool(0.5) {
                    a
                } else {
                    b
                }
            }
        })
        .collect();
    ClusteringScheme { assignment }
}

/// Each free gene mutates with probability `mutation_prob` into a cluster
/// drawn uniformly from its allowed mutation set, computed on the scheme as
/// it was before any gene changed.
pub fn graph_based_mutation<R: Rng + ?Sized>(
    graph: &ProcessingGraph,
    scheme: &ClusteringScheme,
    config: &GaConfig,
    rng: &mut R,
) -> ClusteringScheme {
    let mut mutated = scheme.clone();
    for node in graph.free_nodes() {
        if !rng.gen_bool(config.mutation_prob) {
            continue;
        }
        let allowed = allowed_mutation_set(graph, scheme, node).expect("free node");
        if !allowed.is_empty() {
            mutated.assignment[node.0] = allowed[rng.gen_range(0..allowed.len())];
        }
    }
    mutated
}

fn stats(population: &[Individual]) -> GenerationStats {
    let best_fitness = population.iter().map(Individual::fitness).fold(f64::INFINITY, f64::min);
    let mean_fitness =
        population.iter().map(Individual::fitness).sum::<f64>() / population.len() as f64;
    GenerationStats {
        best_fitness,
        mean_fitness,
    }
}

/// Generational GA: evaluate, keep the elite, refill by
/// select -> crossover -> mutate. Deterministic for a given `config.rng_seed`.
pub fn run_ga(
    graph: &ProcessingGraph,
    profile: &CostProfile,
    params: &FitnessParams,
    config: &GaConfig,
) -> Result<GaResult, Error> {
    config.validate()?;
    profile.validate()?;
    params.validate(graph)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let individual = |scheme: ClusteringScheme| {
        let breakdown = evaluate(graph, &scheme, profile, params);
        Individual { scheme, breakdown }
    };

    let mut population = Vec::with_capacity(config.population_size);
    for _ in 0..config.population_size {
        population.push(individual(graph_based_init(graph, &mut rng)?));
    }

    let mut best = population[0].clone();
    let mut history = Vec::new();
    let mut stall = 0;
    let mut converged = false;
    loop {
        let gen = stats(&population);
        history.push(gen);
        let leader = population
            .iter()
            .min_by(|a, b| a.fitness().total_cmp(&b.fitness()))
            .expect("non-empty population");
        if history.len() == 1 || leader.fitness() < best.fitness() - IMPROVEMENT_EPS {
            best = leader.clone();
            stall = 0;
        } else {
            if leader.fitness() < best.fitness() {
                best = leader.clone();
            }
            stall += 1;
        }
        if stall >= config.stall_generations {
            converged = true;
            break;
        }
        if history.len() >= config.max_generations {
            break;
        }

        let mut order: Vec<usize> = (0..population.len()).collect();
        order.sort_by(|&a, &b| population[a].fitness().total_cmp(&population[b].fitness()).then(a.cmp(&b)));
        let mut next: Vec<Individual> = order[..config.elitism]
            .iter()
            .map(|&i| population[i].clone())
            .collect();
        let fitnesses: Vec<f64> = population.iter().map(Individual::fitness).collect();
        while next.len() < config.population_size {
            let a = &population[roulette_index(&fitnesses, &mut rng)].scheme;
            let b = &population[roulette_index(&fitnesses, &mut rng)].scheme;
            let child = dispersive_crossover(graph, a, b, &mut rng);
            let child = graph_based_mutation(graph, &child, config, &mut rng);
            next.push(individual(child));
        }
        population = next;
    }

    Ok(GaResult {
        best,
        generations_run: history.len(),
        history,
        converged,
    })
}
