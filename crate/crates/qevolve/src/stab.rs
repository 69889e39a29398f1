//! Stabilizer tableau simulation and entanglement entropy profiles.
//!
//! A state reachable from |0…0⟩ by H, P and CNOT gates is represented by
//! the n signed Pauli operators that stabilize it (plus the matching
//! destabilizers, kept so the tableau stays a complete symplectic frame).
//! Gates act by conjugating every row, so simulating a circuit costs
//! O(gates · n) word operations instead of touching 2^n amplitudes.
//!
//! The bipartite entanglement entropy across a cut is read off the GF(2)
//! rank of the stabilizer matrix restricted to one side of the cut; no
//! amplitudes are ever formed. `dense` provides the brute-force
//! statevector oracle used to cross-check both routes in tests.

use crate::bitmat::BinaryMatrix;
use crate::genome::{Gate, Genome};
use crate::pauli::{PauliOperator, SinglePauli};

/// Signed stabilizer tableau for an n-qubit pure stabilizer state.
#[derive(Clone, Debug)]
pub struct StabilizerTableau {
    n: usize,
    stabs: Vec<PauliOperator>,
    destabs: Vec<PauliOperator>,
}

impl StabilizerTableau {
    /// The tableau of |0…0⟩: stabilizers +Z_q, destabilizers +X_q.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "need at least one qubit");
        StabilizerTableau {
            n,
            stabs: (0..n)
                .map(|q| PauliOperator::single(n, q, SinglePauli::Z))
                .collect(),
            destabs: (0..n)
                .map(|q| PauliOperator::single(n, q, SinglePauli::X))
                .collect(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    /// The n stabilizer generators of the current state.
    pub fn stabilizers(&self) -> &[PauliOperator] {
        &self.stabs
    }

    pub fn destabilizers(&self) -> &[PauliOperator] {
        &self.destabs
    }

    /// Applies one gate by conjugating every row.
    pub fn apply(&mut self, gate: Gate) {
        debug_assert!(gate.validate(self.n).is_ok());
        for row in self.stabs.iter_mut().chain(self.destabs.iter_mut()) {
            match gate {
                Gate::H(q) => row.conj_h(q),
                Gate::P(q) => row.conj_p(q),
                Gate::Cnot { control, target } => row.conj_cnot(control, target),
            }
        }
    }

    /// Structural sanity check used by property tests: Hermitian rows,
    /// mutually commuting independent stabilizers, destabilizer q
    /// anticommuting with stabilizer q only.
    pub fn is_valid(&self) -> bool {
        let rows_ok = self
            .stabs
            .iter()
            .chain(&self.destabs)
            .all(|r| r.is_hermitian());
        if !rows_ok {
            return false;
        }
        for i in 0..self.n {
            for j in 0..self.n {
                if !self.stabs[i].commutes_with(&self.stabs[j]) {
                    return false;
                }
                if self.destabs[i].commutes_with(&self.stabs[j]) != (i != j) {
                    return false;
                }
            }
        }
        symplectic_rank(&self.stabs) == self.n
    }
}

/// GF(2) rank of the symplectic (x|z) matrix of the given operators.
fn symplectic_rank(ops: &[PauliOperator]) -> usize {
    if ops.is_empty() {
        return 0;
    }
    let n = ops[0].n_qubits();
    let mut mat = BinaryMatrix::zeros(ops.len(), 2 * n);
    for (r, op) in ops.iter().enumerate() {
        for q in 0..n {
            if op.x_bit(q) {
                mat.set(r, q, true);
            }
            if op.z_bit(q) {
                mat.set(r, n + q, true);
            }
        }
    }
    mat.rank()
}

/// Runs a circuit on |0…0⟩ and returns the final tableau.
pub fn simulate(genome: &Genome) -> StabilizerTableau {
    let mut tab = StabilizerTableau::new(genome.n_qubits());
    for &gate in genome.gates() {
        tab.apply(gate);
    }
    tab
}

/// Conjugates `p` by the circuit: returns U p U† for U = the genome's
/// gate sequence applied left to right.
pub fn conjugate_pauli(genome: &Genome, p: &PauliOperator) -> PauliOperator {
    assert_eq!(genome.n_qubits(), p.n_qubits(), "qubit count mismatch");
    let mut out = p.clone();
    for &gate in genome.gates() {
        match gate {
            Gate::H(q) => out.conj_h(q),
            Gate::P(q) => out.conj_p(q),
            Gate::Cnot { control, target } => out.conj_cnot(control, target),
        }
    }
    out
}

/// Entanglement entropies across every contiguous cut of a state.
///
/// `per_cut[i]` is the entropy S(x) in bits for cut position x = i + 1,
/// where cut x bipartitions the register into {0,…,x−2} and {x−1,…,n−1};
/// x = 1 leaves one side empty, so S(1) = 0 identically.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyProfile {
    per_cut: Vec<u32>,
    mean: f64,
}

impl EntropyProfile {
    /// Entropy for cut position `x` in 1..=n. Cut x keeps qubits
    /// x−1..n−1 on one side (so x = 1 keeps everything and is always 0).
    pub fn cut(&self, x: usize) -> u32 {
        assert!(x >= 1 && x <= self.per_cut.len(), "cut out of range");
        self.per_cut[x - 1]
    }

    pub fn per_cut(&self) -> &[u32] {
        &self.per_cut
    }

    /// Mean of S(x) over all n cut positions.
    pub fn mean(&self) -> f64 {
        self.mean
    }
}

/// Computes S(x) for x = 1..=n from a tableau.
///
/// For cut x, one side of the bipartition is the kept block
/// K = {x−1, …, n−1} (|K| = n − x + 1). The entropy in bits is
///
/// ```text
/// S(x) = rank over GF(2) of the stabilizer rows restricted to K  −  |K|
/// ```
///
/// Restriction keeps the x- and z-columns of the kept qubits only. The
/// rank of the restricted matrix counts generators acting independently
/// on K; each generator that cannot be localized costs one bit of
/// entropy. S(1) is identically 0 because the restriction is the whole
/// matrix, whose rank is n for any valid tableau.
pub fn entropy_profile(tab: &StabilizerTableau) -> EntropyProfile {
    let n = tab.n_qubits();
    let mut per_cut = Vec::with_capacity(n);
    for x in 1..=n {
        let kept = n - x + 1;
        let mut mat = BinaryMatrix::zeros(n, 2 * kept);
        for (r, g) in tab.stabilizers().iter().enumerate() {
            for (c, q) in (x - 1..n).enumerate() {
                if g.x_bit(q) {
                    mat.set(r, c, true);
                }
                if g.z_bit(q) {
                    mat.set(r, kept + c, true);
                }
            }
        }
        let rank = mat.rank();
        debug_assert!(rank >= kept, "stabilizer matrix lost rank");
        per_cut.push((rank - kept) as u32);
    }
    let mean = per_cut.iter().map(|&s| s as f64).sum::<f64>() / n as f64;
    EntropyProfile { per_cut, mean }
}
