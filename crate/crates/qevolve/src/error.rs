//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("CNOT control and target are both qubit {0}")]
    CnotSelfTarget(usize),

    #[error("the CNOT gate set needs at least 2 qubits, got {0}")]
    TooFewQubits(usize),

    #[error("generator set is linearly dependent")]
    DependentGenerators,

    #[error("no stabilizer generator anticommutes with the logical operator")]
    LogicalFixesCodeword,

    #[error("the n/8 optimum is defined for even qubit counts only, got {0}")]
    OddQubitCount(usize),

    #[error("error weight {weight} out of range 1..={n_qubits}")]
    WeightOutOfRange { weight: usize, n_qubits: usize },

    #[error("{n_qubits} qubits is too large for the dense oracle (max {max})")]
    DenseOracleTooLarge { n_qubits: usize, max: usize },

    #[error("invalid Pauli text: {0}")]
    PauliParse(String),

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
