//! Experiment harness for evolving Clifford circuits: seeded GA and
//! random-search sweeps with CSV traces, one-shot circuit analysis,
//! connectivity export, and the syndrome-counting overhead check.

mod commands;
mod config;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use commands::Algorithm;
use config::{Mode, PartialConfig};

#[derive(Parser)]
#[command(
    name = "qevolve",
    version,
    about = "Evolve Clifford circuits toward entangling and error-correcting targets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded genetic-algorithm searches and write trace files
    Evolve(RunArgs),
    /// Random-search baseline with a GA-matched evaluation budget
    RandomSearch(RunArgs),
    /// Score one circuit file and print its full report
    Analyze(AnalyzeArgs),
    /// Print a circuit's CNOT connectivity as Graphviz DOT
    ExportDot {
        /// Circuit file to export
        file: PathBuf,
    },
    /// Check the syndrome-counting bound for weight-t errors on n qubits
    Overhead {
        /// Register size n
        qubits: usize,
        /// Maximum error weight t
        weight: usize,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Config file with the same keys as the long flags; flags win
    #[arg(long)]
    config: Option<PathBuf>,
    /// Fitness landscape
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Register size
    #[arg(long)]
    qubits: Option<usize>,
    /// Independent seeded runs (run i uses seed + i)
    #[arg(long)]
    runs: Option<usize>,
    /// Generation cap per run
    #[arg(long)]
    generations: Option<usize>,
    /// Population size
    #[arg(long)]
    population: Option<usize>,
    /// Purge back to the population size past this head count
    #[arg(long = "max-pop")]
    max_pop: Option<usize>,
    /// Base random seed
    #[arg(long)]
    seed: Option<u64>,
    /// Corrigibility weight w
    #[arg(long)]
    w: Option<f64>,
    /// CSS-degree weight w' (defaults to 1000 in color mode, else 0)
    #[arg(long = "w-prime")]
    w_prime: Option<f64>,
    /// Shortest initial genome
    #[arg(long = "len-min")]
    len_min: Option<usize>,
    /// Longest initial genome
    #[arg(long = "len-max")]
    len_max: Option<usize>,
    /// Stop a run as soon as its best fitness reaches this value
    #[arg(long)]
    target: Option<f64>,
    /// Restrict CNOTs to the edge list in this file ("a b" lines)
    #[arg(long)]
    adjacency: Option<PathBuf>,
    /// Also write fitness normalized by this reference value
    #[arg(long)]
    normalize: Option<f64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn resolve(self) -> Result<config::ExperimentConfig> {
        let from_file = match &self.config {
            Some(path) => PartialConfig::from_file(path)?,
            None => PartialConfig::default(),
        };
        let from_flags = PartialConfig {
            mode: self.mode,
            qubits: self.qubits,
            runs: self.runs,
            generations: self.generations,
            population: self.population,
            max_pop: self.max_pop,
            seed: self.seed,
            w: self.w,
            w_prime: self.w_prime,
            len_min: self.len_min,
            len_max: self.len_max,
            target: self.target,
            adjacency: self.adjacency,
            normalize: self.normalize,
            out: self.out,
        };
        from_flags.or(from_file).resolve()
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Circuit file to score
    file: PathBuf,
    /// Fitness landscape to score against
    #[arg(long, value_enum)]
    mode: Mode,
    /// Corrigibility weight w
    #[arg(long)]
    w: Option<f64>,
    /// CSS-degree weight w' (defaults to 1000 in color mode, else 0)
    #[arg(long = "w-prime")]
    w_prime: Option<f64>,
}

fn main() -> Result<()> {
    // Die quietly when a downstream pipe closes (e.g. `qevolve analyze … | head`)
    // instead of panicking on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match Cli::parse().command {
        Command::Evolve(args) => commands::cmd_run(&args.resolve()?, Algorithm::Genetic),
        Command::RandomSearch(args) => {
            commands::cmd_run(&args.resolve()?, Algorithm::RandomSearch)
        }
        Command::Analyze(args) => {
            let w = args.w.unwrap_or(1000.0);
            let w_prime = args.w_prime.unwrap_or(match args.mode {
                Mode::Color => 1000.0,
                Mode::Toy | Mode::Qecc => 0.0,
            });
            commands::cmd_analyze(&args.file, args.mode, w, w_prime)
        }
        Command::ExportDot { file } => commands::cmd_export_dot(&file),
        Command::Overhead { qubits, weight } => commands::cmd_overhead(qubits, weight),
    }
}
