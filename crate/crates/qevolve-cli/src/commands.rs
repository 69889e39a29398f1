//! Subcommand implementations: seeded GA / random-search sweeps with
//! CSV traces and aggregate statistics, one-shot circuit analysis,
//! DOT export, and the syndrome-counting overhead check.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use rayon::prelude::*;

use qevolve::evolve::{
    run_ga, run_random_search, Evaluation, FitnessEvaluator, RunTrace,
};
use qevolve::qecc::{errors_up_to, syndrome_bitstring, QeccEvaluator};
use qevolve::stab::{entropy_profile, simulate};
use qevolve::toy::{toy_fitness, ToyEvaluator};
use qevolve::Genome;

use crate::config::{ExperimentConfig, Mode};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Genetic,
    RandomSearch,
}

impl Algorithm {
    fn label(self) -> &'static str {
        match self {
            Algorithm::Genetic => "evolve",
            Algorithm::RandomSearch => "random-search",
        }
    }
}

/// Mode-dispatched fitness function shared by every run of a sweep.
enum Evaluator {
    Toy(ToyEvaluator),
    Qecc(QeccEvaluator),
}

impl FitnessEvaluator for Evaluator {
    fn evaluate(&self, genome: &Genome) -> Evaluation {
        match self {
            Evaluator::Toy(e) => e.evaluate(genome),
            Evaluator::Qecc(e) => e.evaluate(genome),
        }
    }

    fn phenotype_columns(&self) -> &'static [&'static str] {
        match self {
            Evaluator::Toy(e) => e.phenotype_columns(),
            Evaluator::Qecc(e) => e.phenotype_columns(),
        }
    }
}

fn build_evaluator(config: &ExperimentConfig) -> Result<Evaluator> {
    Ok(match config.mode {
        Mode::Toy => Evaluator::Toy(ToyEvaluator),
        Mode::Qecc | Mode::Color => Evaluator::Qecc(QeccEvaluator::with_css_weight(
            config.qubits,
            config.w,
            config.w_prime,
        )?),
    })
}

/// Generation count that grants a random search the same evaluation
/// budget as a GA run: the GA spends P + 2G evaluations, the random
/// search spends two per trace row (rounding up when the budget is
/// odd).
pub fn matched_random_search_generations(population: usize, generations: usize) -> usize {
    (population + 2 * generations).div_ceil(2) - 1
}

/// Runs `config.runs` independent seeded searches (run i uses
/// `seed + i`), writes `run_{i}.csv` and `best_{i}.circuit` per run
/// plus `aggregate.csv` and `summary.txt`, and prints the summary.
pub fn cmd_run(config: &ExperimentConfig, algorithm: Algorithm) -> Result<()> {
    let evaluator = build_evaluator(config)?;
    let rs_generations =
        matched_random_search_generations(config.population, config.generations);
    let traces = (0..config.runs)
        .into_par_iter()
        .map(|run| {
            let mut ec = config.evolution_config(config.seed + run as u64);
            match algorithm {
                Algorithm::Genetic => run_ga(&ec, &evaluator),
                Algorithm::RandomSearch => {
                    ec.max_generations = rs_generations;
                    run_random_search(&ec, &evaluator)
                }
            }
        })
        .collect::<std::result::Result<Vec<RunTrace>, qevolve::Error>>()?;

    fs::create_dir_all(&config.out)
        .with_context(|| format!("creating output directory {}", config.out.display()))?;
    let write = |name: String, contents: String| -> Result<()> {
        let path = config.out.join(name);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
    };
    for (run, trace) in traces.iter().enumerate() {
        write(format!("run_{run:03}.csv"), trace.to_csv())?;
        write(format!("best_{run:03}.circuit"), trace.best.genome.to_text())?;
    }
    let stats = AggregateStats::from_traces(config, &traces);
    write("aggregate.csv".into(), stats.aggregate_csv(config.normalize))?;
    let summary = render_summary(config, algorithm, rs_generations, &traces, &stats);
    write("summary.txt".into(), summary.clone())?;

    print!("{summary}");
    println!("wrote {} run(s) to {}", config.runs, config.out.display());
    Ok(())
}

/// Cross-run statistics: the mean best-fitness curve and a success
/// table.
pub struct AggregateStats {
    /// Mean of the runs' best fitness at each generation; runs that
    /// halted early contribute their final value onward.
    pub mean_best: Vec<f64>,
    pub success: SuccessSummary,
}

pub enum SuccessSummary {
    /// Runs whose best circuit reaches C = 1, bucketed by depth.
    DepthTable { runs: usize, hits: [usize; 3] },
    /// Runs whose best fitness reached the configured target.
    Target { runs: usize, target: f64, hits: usize },
    /// Toy mode without a target: nothing to tabulate.
    None,
}

/// The depth cutoffs of the success table, loosest first.
pub const DEPTH_THRESHOLDS: [usize; 3] = [6, 5, 4];

impl AggregateStats {
    pub fn from_traces(config: &ExperimentConfig, traces: &[RunTrace]) -> AggregateStats {
        let longest = traces.iter().map(|t| t.rows.len()).max().unwrap_or(0);
        let mut mean_best = Vec::with_capacity(longest);
        for g in 0..longest {
            let sum: f64 = traces
                .iter()
                .map(|t| t.rows[g.min(t.rows.len() - 1)].best_fitness)
                .sum();
            mean_best.push(sum / traces.len() as f64);
        }

        let success = match config.mode {
            Mode::Qecc | Mode::Color => {
                let columns = &traces[0].phenotype_columns;
                let c_col = columns
                    .iter()
                    .position(|c| c == "C")
                    .expect("code traces carry a C column");
                let depth_col = columns
                    .iter()
                    .position(|c| c == "depth")
                    .expect("code traces carry a depth column");
                let mut hits = [0usize; 3];
                for trace in traces {
                    if trace.best.phenotype[c_col] == 1.0 {
                        let depth = trace.best.phenotype[depth_col];
                        for (k, limit) in DEPTH_THRESHOLDS.iter().enumerate() {
                            if depth <= *limit as f64 {
                                hits[k] += 1;
                            }
                        }
                    }
                }
                debug_assert!(hits[2] <= hits[1] && hits[1] <= hits[0]);
                SuccessSummary::DepthTable {
                    runs: traces.len(),
                    hits,
                }
            }
            Mode::Toy => match config.target {
                Some(target) => SuccessSummary::Target {
                    runs: traces.len(),
                    target,
                    hits: traces.iter().filter(|t| t.best.fitness >= target).count(),
                },
                None => SuccessSummary::None,
            },
        };
        AggregateStats { mean_best, success }
    }

    /// `generation,mean_best_fitness` rows, with a normalized column
    /// appended when a reference value is configured.
    pub fn aggregate_csv(&self, normalize: Option<f64>) -> String {
        let mut out = String::new();
        match normalize {
            None => {
                out.push_str("generation,mean_best_fitness\n");
                for (g, m) in self.mean_best.iter().enumerate() {
                    out.push_str(&format!("{g},{m}\n"));
                }
            }
            Some(reference) => {
                out.push_str("generation,mean_best_fitness,mean_best_fitness_normalized\n");
                for (g, m) in self.mean_best.iter().enumerate() {
                    out.push_str(&format!("{g},{m},{}\n", m / reference));
                }
            }
        }
        out
    }
}

fn render_summary(
    config: &ExperimentConfig,
    algorithm: Algorithm,
    rs_generations: usize,
    traces: &[RunTrace],
    stats: &AggregateStats,
) -> String {
    let mut s = String::new();
    s.push_str(&format!("command = {}\n", algorithm.label()));
    if algorithm == Algorithm::RandomSearch {
        s.push_str(&format!("budget-matched generations = {rs_generations}\n"));
    }
    s.push_str(&config.echo());
    s.push('\n');

    s.push_str("run seed evaluations best_fitness");
    for column in &traces[0].phenotype_columns {
        s.push(' ');
        s.push_str(column);
    }
    s.push('\n');
    for (run, trace) in traces.iter().enumerate() {
        s.push_str(&format!(
            "{run:03} {} {} {}",
            config.seed + run as u64,
            trace.evaluations,
            trace.best.fitness
        ));
        for value in &trace.best.phenotype {
            s.push_str(&format!(" {value}"));
        }
        s.push('\n');
    }
    s.push('\n');

    match stats.success {
        SuccessSummary::DepthTable { runs, hits } => {
            s.push_str("success rates (runs whose best circuit has C = 1):\n");
            for (k, limit) in DEPTH_THRESHOLDS.iter().enumerate() {
                s.push_str(&format!(
                    "depth <= {limit}: {}/{runs} = {}\n",
                    hits[k],
                    hits[k] as f64 / runs as f64
                ));
            }
        }
        SuccessSummary::Target { runs, target, hits } => {
            s.push_str(&format!(
                "runs reaching target {target}: {hits}/{runs} = {}\n",
                hits as f64 / runs as f64
            ));
        }
        SuccessSummary::None => {
            s.push_str("no target configured; success table omitted\n");
        }
    }
    s
}

fn load_circuit(path: &Path) -> Result<Genome> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Genome::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn set_bit_list(b: u64) -> String {
    let bits: Vec<String> = (0..64)
        .filter(|j| (b >> j) & 1 == 1)
        .map(|j| j.to_string())
        .collect();
    bits.join(", ")
}

/// Scores one circuit file and prints the full report for its mode.
pub fn cmd_analyze(file: &Path, mode: Mode, w: f64, w_prime: f64) -> Result<()> {
    let genome = load_circuit(file)?;
    let n = genome.n_qubits();
    println!(
        "circuit: {} gate(s) on {n} qubits, depth {}",
        genome.len(),
        genome.depth()
    );
    match mode {
        Mode::Toy => {
            let profile = entropy_profile(&simulate(&genome));
            println!("entanglement entropy by cut:");
            for x in 1..=n {
                println!("  S({x}) = {}", profile.cut(x));
            }
            println!("mean entropy = {}", profile.mean());
            let phenotype = toy_fitness(&genome);
            println!("fitness (mean entropy / depth) = {}", phenotype.fitness);
        }
        Mode::Qecc | Mode::Color => {
            let evaluator = QeccEvaluator::with_css_weight(n, w, w_prime)?;
            let phenotype = evaluator.evaluate_full(&genome);
            let (pair, report) = evaluator.report_for_pair(&genome, phenotype.best_pair)?;
            println!("corrigibility C = {}", phenotype.corrigibility);
            println!("css degree = {}", phenotype.css_degree);
            println!(
                "best pair = {} (logical flip on input qubit(s) {})",
                phenotype.best_pair,
                set_bit_list(phenotype.best_pair)
            );
            println!(
                "fitness = {} (w = {w}, w' = {w_prime})",
                phenotype.fitness
            );
            println!("undetectable errors = {}", report.e_und);
            println!("uncorrectable errors = {}", report.e_unc);
            println!();
            println!(
                "syndrome table for pair {} ({} generators):",
                phenotype.best_pair,
                pair.common.len()
            );
            println!("error,syndrome");
            for (error, syndrome) in evaluator.errors().iter().zip(&report.syndromes) {
                println!("{error},{}", syndrome_bitstring(*syndrome, pair.common.len()));
            }
            println!();
            print_overhead(n, 1)?;
        }
    }
    Ok(())
}

/// Prints a circuit's CNOT connectivity as a Graphviz graph.
pub fn cmd_export_dot(file: &Path) -> Result<()> {
    let genome = load_circuit(file)?;
    print!("{}", genome.to_dot());
    Ok(())
}

/// Checks whether n qubits offer enough syndromes for all errors of
/// weight at most t.
pub fn cmd_overhead(qubits: usize, weight: usize) -> Result<()> {
    print_overhead(qubits, weight)
}

fn print_overhead(qubits: usize, weight: usize) -> Result<()> {
    let errors = errors_up_to(qubits, weight)?;
    let required = errors + 1;
    let available: u128 = 1 << (qubits - 1);
    println!("errors of weight 1..={weight} on {qubits} qubits: {errors}");
    println!("syndromes required (errors plus the clean state): {required}");
    println!("syndromes available: 2^({qubits}-1) = {available}");
    let verdict = if required == available {
        "saturated"
    } else if required < available {
        "satisfied with slack"
    } else {
        "violated"
    };
    println!("overhead inequality: {verdict}");
    Ok(())
}
