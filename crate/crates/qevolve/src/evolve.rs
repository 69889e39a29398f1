//! The genetic-algorithm engine and the random-search baseline.
//!
//! Both are generic over a [`FitnessEvaluator`], so the same machinery
//! drives the entanglement-per-depth landscape and the error-correction
//! landscape. One GA generation breeds exactly two children (roulette
//! selection → single-point crossover → mutation → evaluation) and
//! purges down to `population_size` whenever the population exceeds
//! `max_population`; random search draws two fresh genomes per
//! generation so the two algorithms spend identical evaluation budgets
//! per generation.
//!
//! Every random draw comes from the run's own seeded stream in a fixed
//! order, so a (config, evaluator) pair fully determines the trace.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};

use crate::genome::{crossover, GateSampler, Genome};
use crate::{Error, Result, RngStream};

/// Fitness plus the evaluator-specific phenotype record (the reals a
/// trace row reports alongside fitness, e.g. mean entropy and depth).
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub fitness: f64,
    pub phenotype: Vec<f64>,
}

/// A fitness landscape. Implementations must be deterministic: the same
/// genome always maps to the same evaluation.
pub trait FitnessEvaluator {
    fn evaluate(&self, genome: &Genome) -> Evaluation;

    /// Column names for the phenotype entries, in order, used as CSV
    /// headers.
    fn phenotype_columns(&self) -> &'static [&'static str];
}

/// A genome with its cached evaluation.
#[derive(Clone, Debug)]
pub struct Individual {
    pub genome: Genome,
    pub fitness: f64,
    pub phenotype: Vec<f64>,
}

impl Individual {
    fn from_evaluation(genome: Genome, ev: Evaluation) -> Self {
        Individual {
            genome,
            fitness: ev.fitness,
            phenotype: ev.phenotype,
        }
    }
}

/// Run parameters shared by the GA and random search.
#[derive(Clone, Debug)]
pub struct EvolutionConfig {
    pub n_qubits: usize,
    pub population_size: usize,
    pub max_population: usize,
    pub max_generations: usize,
    pub target_fitness: Option<f64>,
    pub seed: u64,
    /// Inclusive length range for freshly drawn genomes.
    pub len_range: (usize, usize),
    /// Probability that a bred child is mutated (coin drawn per child).
    pub mutation_probability: f64,
    /// When set, CNOTs are restricted to these undirected edges during
    /// initialization and mutation.
    pub cnot_edges: Option<Vec<(usize, usize)>>,
}

impl EvolutionConfig {
    /// Defaults: population 100 capped at 200, genome lengths in
    /// [n, 3n], unconditional mutation, unrestricted connectivity.
    pub fn new(n_qubits: usize, max_generations: usize, seed: u64) -> Self {
        EvolutionConfig {
            n_qubits,
            population_size: 100,
            max_population: 200,
            max_generations,
            target_fitness: None,
            seed,
            len_range: (n_qubits, 3 * n_qubits),
            mutation_probability: 1.0,
            cnot_edges: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: &str| Err(Error::InvalidConfig(reason.to_string()));
        if self.n_qubits < 2 {
            return Err(Error::TooFewQubits(self.n_qubits));
        }
        if self.population_size < 2 {
            return bad("population_size must be at least 2");
        }
        if self.max_population < self.population_size {
            return bad("max_population must be at least population_size");
        }
        if self.len_range.0 < 1 || self.len_range.0 > self.len_range.1 {
            return bad("genome length range must satisfy 1 <= min <= max");
        }
        if !(0.0..=1.0).contains(&self.mutation_probability) {
            return bad("mutation_probability must lie in [0, 1]");
        }
        Ok(())
    }

    fn build_sampler(&self) -> Result<GateSampler> {
        match &self.cnot_edges {
            None => GateSampler::full(self.n_qubits),
            Some(edges) => GateSampler::restricted(self.n_qubits, edges),
        }
    }
}

/// The shift constant used when fitnesses are not all positive:
/// ε = 10⁻⁹ · max(1, f_max − f_min).
pub fn default_roulette_epsilon(fitnesses: &[f64]) -> f64 {
    let f_min = fitnesses.iter().copied().fold(f64::INFINITY, f64::min);
    let f_max = fitnesses.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    1e-9 * (f_max - f_min).max(1.0)
}

/// Unnormalized roulette-selection weights.
///
/// All fitnesses equal → uniform. All strictly positive → the raw
/// fitnesses (plain proportional selection). Otherwise each weight is
/// f_i − f_min + ε, which keeps proportional selection meaningful on
/// landscapes that start out negative.
pub fn roulette_weights(fitnesses: &[f64], epsilon: f64) -> Vec<f64> {
    assert!(!fitnesses.is_empty(), "empty population");
    let f_min = fitnesses.iter().copied().fold(f64::INFINITY, f64::min);
    let f_max = fitnesses.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if f_min == f_max {
        return vec![1.0; fitnesses.len()];
    }
    if f_min > 0.0 {
        return fitnesses.to_vec();
    }
    fitnesses.iter().map(|&f| f - f_min + epsilon).collect()
}

/// Draws one index with probability proportional to `weights` using a
/// single uniform draw.
fn sample_index(weights: &[f64], rng: &mut RngStream) -> usize {
    let total: f64 = weights.iter().sum();
    debug_assert!(total > 0.0, "weights must have positive total");
    let mut u = rng.gen::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        u -= w;
        if u < 0.0 {
            return i;
        }
    }
    weights.len() - 1
}

/// One per-generation line of a run trace.
#[derive(Clone, Debug)]
pub struct TraceRow {
    pub generation: usize,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    pub best_depth: usize,
    /// Phenotype of the generation's best individual.
    pub best_phenotype: Vec<f64>,
}

/// Full record of one run: per-generation rows, the final champion, and
/// the total number of fitness evaluations spent.
#[derive(Clone, Debug)]
pub struct RunTrace {
    pub phenotype_columns: Vec<String>,
    pub rows: Vec<TraceRow>,
    pub best: Individual,
    pub evaluations: u64,
}

impl RunTrace {
    /// CSV serialization: `generation,best_fitness,mean_fitness,
    /// best_depth` plus the evaluator's phenotype columns.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("generation,best_fitness,mean_fitness,best_depth");
        for col in &self.phenotype_columns {
            write!(out, ",{col}").unwrap();
        }
        out.push('\n');
        for row in &self.rows {
            write!(
                out,
                "{},{},{},{}",
                row.generation, row.best_fitness, row.mean_fitness, row.best_depth
            )
            .unwrap();
            for v in &row.best_phenotype {
                write!(out, ",{v}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// In-flight GA state; step it manually or drive it via [`run_ga`].
pub struct GaRun {
    config: EvolutionConfig,
    sampler: GateSampler,
    rng: RngStream,
    population: Vec<Individual>,
    evaluations: u64,
}

impl GaRun {
    /// Validates the config and evaluates the initial random population
    /// (`population_size` evaluations).
    pub fn new<E: FitnessEvaluator>(config: &EvolutionConfig, evaluator: &E) -> Result<Self> {
        config.validate()?;
        let sampler = config.build_sampler()?;
        let mut rng = RngStream::seed_from_u64(config.seed);
        let (lo, hi) = config.len_range;
        let population: Vec<Individual> = (0..config.population_size)
            .map(|_| {
                let genome = sampler.random_genome(lo, hi, &mut rng);
                let ev = evaluator.evaluate(&genome);
                Individual::from_evaluation(genome, ev)
            })
            .collect();
        let evaluations = population.len() as u64;
        Ok(GaRun {
            config: config.clone(),
            sampler,
            rng,
            population,
            evaluations,
        })
    }

    pub fn population(&self) -> &[Individual] {
        &self.population
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    /// The current champion: the first individual attaining the maximum
    /// fitness (explicit first-max scan, so ties resolve to the oldest).
    pub fn best(&self) -> &Individual {
        let mut best = &self.population[0];
        for ind in &self.population[1..] {
            if ind.fitness > best.fitness {
                best = ind;
            }
        }
        best
    }

    fn target_reached(&self) -> bool {
        self.config
            .target_fitness
            .is_some_and(|t| self.best().fitness >= t)
    }

    /// One breeding cycle: roulette-select two parents (independent
    /// draws, may coincide), crossover, mutate each child with the
    /// configured probability, evaluate and append both, then purge the
    /// worst down to `population_size` if the cap is exceeded.
    pub fn step<E: FitnessEvaluator>(&mut self, evaluator: &E) {
        let fitnesses: Vec<f64> = self.population.iter().map(|i| i.fitness).collect();
        let epsilon = default_roulette_epsilon(&fitnesses);
        let weights = roulette_weights(&fitnesses, epsilon);
        let pa = sample_index(&weights, &mut self.rng);
        let pb = sample_index(&weights, &mut self.rng);
        let (c1, c2) = crossover(
            &self.population[pa].genome,
            &self.population[pb].genome,
            &mut self.rng,
        );
        for child in [c1, c2] {
            let child = if self.rng.gen::<f64>() < self.config.mutation_probability {
                self.sampler.mutate(&child, &mut self.rng)
            } else {
                child
            };
            let ev = evaluator.evaluate(&child);
            self.evaluations += 1;
            self.population.push(Individual::from_evaluation(child, ev));
        }
        if self.population.len() > self.config.max_population {
            self.purge();
        }
    }

    /// Truncation elitism: keep the `population_size` fittest (stable
    /// order among ties, so older individuals survive first).
    fn purge(&mut self) {
        self.population
            .sort_by(|a, b| b.fitness.total_cmp(&a.fitness));
        self.population.truncate(self.config.population_size);
    }

    fn trace_row(&self, generation: usize) -> TraceRow {
        let best = self.best();
        let mean = self.population.iter().map(|i| i.fitness).sum::<f64>()
            / self.population.len() as f64;
        TraceRow {
            generation,
            best_fitness: best.fitness,
            mean_fitness: mean,
            best_depth: best.genome.depth(),
            best_phenotype: best.phenotype.clone(),
        }
    }
}

/// Runs the GA to completion: `max_generations` breeding cycles, or
/// fewer if `target_fitness` is reached. Row 0 describes the initial
/// random population.
pub fn run_ga<E: FitnessEvaluator>(config: &EvolutionConfig, evaluator: &E) -> Result<RunTrace> {
    let mut run = GaRun::new(config, evaluator)?;
    let mut rows = vec![run.trace_row(0)];
    let mut generation = 0;
    while generation < config.max_generations && !run.target_reached() {
        run.step(evaluator);
        generation += 1;
        rows.push(run.trace_row(generation));
    }
    Ok(RunTrace {
        phenotype_columns: evaluator
            .phenotype_columns()
            .iter()
            .map(|s| s.to_string())
            .collect(),
        best: run.best().clone(),
        evaluations: run.evaluations,
        rows,
    })
}

/// The baseline: each generation draws two fresh random genomes (the
/// GA's per-generation evaluation budget) and keeps the best ever seen.
/// Halting rules match [`run_ga`], so total evaluations equal twice the
/// number of generation rows.
pub fn run_random_search<E: FitnessEvaluator>(
    config: &EvolutionConfig,
    evaluator: &E,
) -> Result<RunTrace> {
    config.validate()?;
    let sampler = config.build_sampler()?;
    let mut rng = RngStream::seed_from_u64(config.seed);
    let (lo, hi) = config.len_range;
    let mut best: Option<Individual> = None;
    let mut rows = Vec::new();
    let mut evaluations = 0u64;
    for generation in 0..=config.max_generations {
        let mut fitness_sum = 0.0;
        for _ in 0..2 {
            let genome = sampler.random_genome(lo, hi, &mut rng);
            let ev = evaluator.evaluate(&genome);
            evaluations += 1;
            fitness_sum += ev.fitness;
            let better = best
                .as_ref()
                .is_none_or(|b: &Individual| ev.fitness > b.fitness);
            if better {
                best = Some(Individual::from_evaluation(genome, ev));
            }
        }
        let champion = best.as_ref().unwrap();
        rows.push(TraceRow {
            generation,
            best_fitness: champion.fitness,
            mean_fitness: fitness_sum / 2.0,
            best_depth: champion.genome.depth(),
            best_phenotype: champion.phenotype.clone(),
        });
        let target_reached = config
            .target_fitness
            .is_some_and(|t| champion.fitness >= t);
        if target_reached {
            break;
        }
    }
    Ok(RunTrace {
        phenotype_columns: evaluator
            .phenotype_columns()
            .iter()
            .map(|s| s.to_string())
            .collect(),
        best: best.unwrap(),
        evaluations,
        rows,
    })
}
