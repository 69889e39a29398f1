//! Experiment configuration. Command-line flags and line-oriented
//! config files (`key = value`, `#` comments) share one key set; flags
//! override file values, and defaults fill whatever remains.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use qevolve::evolve::EvolutionConfig;

/// Which fitness landscape an experiment runs on.
#[derive(Copy, Clone, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    /// Mean entanglement entropy over circuit depth.
    Toy,
    /// Best-pair corrigibility: w·C − depth.
    Qecc,
    /// Corrigibility plus a CSS-degree reward: w·C − depth + w′·CSS.
    Color,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Toy => "toy",
            Mode::Qecc => "qecc",
            Mode::Color => "color",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "toy" => Ok(Mode::Toy),
            "qecc" => Ok(Mode::Qecc),
            "color" => Ok(Mode::Color),
            other => Err(format!("unknown mode {other:?} (expected toy, qecc, or color)")),
        }
    }
}

/// A configuration with every field still optional: one of these comes
/// from the flags, one from the config file, and `or` merges them.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PartialConfig {
    pub mode: Option<Mode>,
    pub qubits: Option<usize>,
    pub runs: Option<usize>,
    pub generations: Option<usize>,
    pub population: Option<usize>,
    pub max_pop: Option<usize>,
    pub seed: Option<u64>,
    pub w: Option<f64>,
    pub w_prime: Option<f64>,
    pub len_min: Option<usize>,
    pub len_max: Option<usize>,
    pub target: Option<f64>,
    pub adjacency: Option<PathBuf>,
    pub normalize: Option<f64>,
    pub out: Option<PathBuf>,
}

impl PartialConfig {
    pub fn from_file(path: &Path) -> Result<PartialConfig> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        PartialConfig::parse(&text)
            .with_context(|| format!("in config file {}", path.display()))
    }

    /// Parses `key = value` lines; keys are spelled exactly like the
    /// long flags. Repeated keys keep the last value.
    pub fn parse(text: &str) -> Result<PartialConfig> {
        let mut out = PartialConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {line_no}: expected `key = value`"))?;
            let key = key.trim();
            let value = value.trim();
            if value.is_empty() {
                bail!("line {line_no}: empty value for key {key:?}");
            }
            match key {
                "mode" => out.mode = Some(value.parse().map_err(|e| anyhow!("line {line_no}: {e}"))?),
                "qubits" => out.qubits = Some(parse_value(line_no, key, value)?),
                "runs" => out.runs = Some(parse_value(line_no, key, value)?),
                "generations" => out.generations = Some(parse_value(line_no, key, value)?),
                "population" => out.population = Some(parse_value(line_no, key, value)?),
                "max-pop" => out.max_pop = Some(parse_value(line_no, key, value)?),
                "seed" => out.seed = Some(parse_value(line_no, key, value)?),
                "w" => out.w = Some(parse_value(line_no, key, value)?),
                "w-prime" => out.w_prime = Some(parse_value(line_no, key, value)?),
                "len-min" => out.len_min = Some(parse_value(line_no, key, value)?),
                "len-max" => out.len_max = Some(parse_value(line_no, key, value)?),
                "target" => out.target = Some(parse_value(line_no, key, value)?),
                "adjacency" => out.adjacency = Some(PathBuf::from(value)),
                "normalize" => out.normalize = Some(parse_value(line_no, key, value)?),
                "out" => out.out = Some(PathBuf::from(value)),
                other => bail!("line {line_no}: unknown key {other:?}"),
            }
        }
        Ok(out)
    }

    /// Merges two partial configs; `self` wins where both are set.
    pub fn or(self, fallback: PartialConfig) -> PartialConfig {
        PartialConfig {
            mode: self.mode.or(fallback.mode),
            qubits: self.qubits.or(fallback.qubits),
            runs: self.runs.or(fallback.runs),
            generations: self.generations.or(fallback.generations),
            population: self.population.or(fallback.population),
            max_pop: self.max_pop.or(fallback.max_pop),
            seed: self.seed.or(fallback.seed),
            w: self.w.or(fallback.w),
            w_prime: self.w_prime.or(fallback.w_prime),
            len_min: self.len_min.or(fallback.len_min),
            len_max: self.len_max.or(fallback.len_max),
            target: self.target.or(fallback.target),
            adjacency: self.adjacency.or(fallback.adjacency),
            normalize: self.normalize.or(fallback.normalize),
            out: self.out.or(fallback.out),
        }
    }

    /// Fills defaults, loads the adjacency file if one was named, and
    /// validates. `mode`, `qubits`, and `out` have no defaults.
    pub fn resolve(self) -> Result<ExperimentConfig> {
        let mode = self.mode.context("missing required key: mode")?;
        let qubits = self.qubits.context("missing required key: qubits")?;
        let out = self.out.context("missing required key: out")?;
        let adjacency = match &self.adjacency {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading adjacency file {}", path.display()))?;
                Some(
                    parse_adjacency(&text)
                        .with_context(|| format!("in adjacency file {}", path.display()))?,
                )
            }
            None => None,
        };
        let config = ExperimentConfig {
            mode,
            qubits,
            runs: self.runs.unwrap_or(1),
            generations: self.generations.unwrap_or(2000),
            population: self.population.unwrap_or(100),
            max_pop: self.max_pop.unwrap_or(200),
            seed: self.seed.unwrap_or(1),
            w: self.w.unwrap_or(1000.0),
            w_prime: self.w_prime.unwrap_or(match mode {
                Mode::Color => 1000.0,
                Mode::Toy | Mode::Qecc => 0.0,
            }),
            len_min: self.len_min.unwrap_or(qubits),
            len_max: self.len_max.unwrap_or(3 * qubits),
            target: self.target,
            adjacency,
            normalize: self.normalize,
            out,
        };
        config.validate()?;
        Ok(config)
    }
}

fn parse_value<T>(line_no: usize, key: &str, value: &str) -> Result<T>
where
    T: FromStr,
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|e| anyhow!("line {line_no}: invalid value for {key}: {e}"))
}

/// Edge list for restricted connectivity: one `a b` pair per line,
/// `#` comments allowed.
pub fn parse_adjacency(text: &str) -> Result<Vec<(usize, usize)>> {
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            bail!("line {line_no}: expected two qubit indices, got {:?}", line);
        }
        let a = parse_value(line_no, "edge endpoint", fields[0])?;
        let b = parse_value(line_no, "edge endpoint", fields[1])?;
        edges.push((a, b));
    }
    if edges.is_empty() {
        bail!("adjacency file lists no edges");
    }
    Ok(edges)
}

/// A fully resolved experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub qubits: usize,
    pub runs: usize,
    pub generations: usize,
    pub population: usize,
    pub max_pop: usize,
    pub seed: u64,
    pub w: f64,
    pub w_prime: f64,
    pub len_min: usize,
    pub len_max: usize,
    pub target: Option<f64>,
    pub adjacency: Option<Vec<(usize, usize)>>,
    pub normalize: Option<f64>,
    pub out: PathBuf,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.runs < 1 {
            bail!("runs must be at least 1");
        }
        if self.generations < 1 {
            bail!("generations must be at least 1");
        }
        if self.w <= 0.0 {
            bail!("w must be positive");
        }
        if self.w_prime < 0.0 {
            bail!("w-prime must be nonnegative");
        }
        if let Some(t) = self.normalize {
            if t <= 0.0 {
                bail!("normalize must be positive");
            }
        }
        self.evolution_config(self.seed).validate()?;
        Ok(())
    }

    /// The per-run engine settings; each run swaps in its own seed.
    pub fn evolution_config(&self, seed: u64) -> EvolutionConfig {
        let mut ec = EvolutionConfig::new(self.qubits, self.generations, seed);
        ec.population_size = self.population;
        ec.max_population = self.max_pop;
        ec.len_range = (self.len_min, self.len_max);
        ec.target_fitness = self.target;
        ec.cnot_edges = self.adjacency.clone();
        ec
    }

    /// Deterministic `key = value` echo for summaries. Paths are
    /// deliberately omitted so that reruns into different directories
    /// stay byte-identical.
    pub fn echo(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("mode = {}\n", self.mode));
        s.push_str(&format!("qubits = {}\n", self.qubits));
        s.push_str(&format!("runs = {}\n", self.runs));
        s.push_str(&format!("generations = {}\n", self.generations));
        s.push_str(&format!("population = {}\n", self.population));
        s.push_str(&format!("max-pop = {}\n", self.max_pop));
        s.push_str(&format!("seed = {}\n", self.seed));
        s.push_str(&format!("w = {}\n", self.w));
        s.push_str(&format!("w-prime = {}\n", self.w_prime));
        s.push_str(&format!("len-min = {}\n", self.len_min));
        s.push_str(&format!("len-max = {}\n", self.len_max));
        match self.target {
            Some(t) => s.push_str(&format!("target = {t}\n")),
            None => s.push_str("target = none\n"),
        }
        match &self.adjacency {
            Some(edges) => s.push_str(&format!("adjacency = {} edges\n", edges.len())),
            None => s.push_str("adjacency = none\n"),
        }
        match self.normalize {
            Some(t) => s.push_str(&format!("normalize = {t}\n")),
            None => s.push_str("normalize = none\n"),
        }
        s
    }
}
