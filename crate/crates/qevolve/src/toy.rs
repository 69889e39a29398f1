//! The warm-up landscape: mean entanglement entropy per unit depth.
//!
//! The score of a circuit is ⟨S⟩/D, the mean of the per-cut entropies
//! divided by circuit depth. The mean entropy of any n-qubit state is at
//! most n/4 (the tent-shaped profile of n/2 nested Bell pairs), and that
//! profile is reachable at depth 2, so the landscape's global maximum is
//! n/8 for even n. Zero-depth circuits score 0: their entropy is 0, so
//! this is the limit value and keeps selection total.

use crate::evolve::{Evaluation, FitnessEvaluator};
use crate::genome::Genome;
use crate::stab::{entropy_profile, simulate};
use crate::{Error, Result};

/// What the toy landscape measures about one circuit.
#[derive(Clone, Debug, PartialEq)]
pub struct ToyPhenotype {
    pub mean_entropy: f64,
    pub depth: usize,
    pub fitness: f64,
}

/// Scores one circuit: simulate, read the entropy profile, divide the
/// mean by the depth.
pub fn toy_fitness(genome: &Genome) -> ToyPhenotype {
    let depth = genome.depth();
    if depth == 0 {
        return ToyPhenotype {
            mean_entropy: 0.0,
            depth: 0,
            fitness: 0.0,
        };
    }
    let mean_entropy = entropy_profile(&simulate(genome)).mean();
    ToyPhenotype {
        mean_entropy,
        depth,
        fitness: mean_entropy / depth as f64,
    }
}

/// The landscape's global maximum, n/8: mean entropy is capped at n/4
/// and the cap is reachable at depth 2 (Bell pairs nested around the
/// register midpoint). Only defined for even registers.
pub fn toy_fitness_max(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewQubits(n));
    }
    if n % 2 != 0 {
        return Err(Error::OddQubitCount(n));
    }
    Ok(n as f64 / 8.0)
}

/// [`FitnessEvaluator`] adapter; phenotype columns `mean_entropy,depth`.
pub struct ToyEvaluator;

impl FitnessEvaluator for ToyEvaluator {
    fn evaluate(&self, genome: &Genome) -> Evaluation {
        let p = toy_fitness(genome);
        Evaluation {
            fitness: p.fitness,
            phenotype: vec![p.mean_entropy, p.depth as f64],
        }
    }

    fn phenotype_columns(&self) -> &'static [&'static str] {
        &["mean_entropy", "depth"]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genome::{Gate, GateSampler};
    use rand::SeedableRng;

    fn nested_bell(n: usize) -> Genome {
        let mut gates = Vec::new();
        for q in 0..n / 2 {
            gates.push(Gate::H(q));
            gates.push(Gate::Cnot { control: q, target: n - 1 - q });
        }
        Genome::new(n, gates).unwrap()
    }

    #[test]
    fn empty_circuit_scores_zero() {
        let p = toy_fitness(&Genome::empty(4));
        assert_eq!(p.fitness, 0.0);
        assert_eq!(p.mean_entropy, 0.0);
        assert_eq!(p.depth, 0);
    }

    #[test]
    fn product_state_scores_zero() {
        let g = Genome::new(4, vec![Gate::H(0)]).unwrap();
        let p = toy_fitness(&g);
        assert_eq!(p.mean_entropy, 0.0);
        assert_eq!(p.depth, 1);
        assert_eq!(p.fitness, 0.0);
    }

    #[test]
    fn nested_bell_circuit_attains_the_maximum() {
        let p = toy_fitness(&nested_bell(6));
        assert!((p.mean_entropy - 1.5).abs() < 1e-12);
        assert_eq!(p.depth, 2);
        assert!((p.fitness - 0.75).abs() < 1e-12);
        assert!((p.fitness - toy_fitness_max(6).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn maximum_values_per_register_size() {
        assert_eq!(toy_fitness_max(4).unwrap(), 0.5);
        assert_eq!(toy_fitness_max(8).unwrap(), 1.0);
        assert_eq!(toy_fitness_max(16).unwrap(), 2.0);
        assert_eq!(toy_fitness_max(5), Err(Error::OddQubitCount(5)));
        assert_eq!(toy_fitness_max(1), Err(Error::TooFewQubits(1)));
    }

    #[test]
    fn no_random_circuit_beats_the_bound() {
        let mut rng = crate::RngStream::seed_from_u64(606);
        for n in [4usize, 6, 8] {
            let bound = toy_fitness_max(n).unwrap();
            let sampler = GateSampler::full(n).unwrap();
            for _ in 0..300 {
                let g = sampler.random_genome(1, 4 * n, &mut rng);
                let p = toy_fitness(&g);
                assert!(p.fitness <= bound + 1e-12, "n={n}: {}", p.fitness);
                assert!(p.mean_entropy <= n as f64 / 4.0 + 1e-12);
            }
        }
    }

    #[test]
    fn maximal_fitness_implies_depth_two() {
        // anything scoring n/8 must have depth exactly 2 and mean n/4;
        // check on the known maximizer plus a deepened variant
        let g = nested_bell(8);
        assert_eq!(toy_fitness(&g).depth, 2);
        let mut deeper = g.clone();
        deeper.push(Gate::H(0)).unwrap();
        deeper.push(Gate::H(0)).unwrap(); // H^2 = I but adds two layers
        let p = toy_fitness(&deeper);
        assert_eq!(p.depth, 4);
        assert!(p.fitness < toy_fitness_max(8).unwrap());
        assert!((p.mean_entropy - 2.0).abs() < 1e-12);
    }

    #[test]
    fn evaluator_phenotype_layout() {
        let p = ToyEvaluator.evaluate(&nested_bell(4));
        assert_eq!(ToyEvaluator.phenotype_columns(), ["mean_entropy", "depth"]);
        assert_eq!(p.phenotype.len(), 2);
        assert!((p.fitness - 0.5).abs() < 1e-12);
        assert_eq!(p.phenotype[1], 2.0);
    }
}
