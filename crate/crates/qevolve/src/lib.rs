//! Evolutionary synthesis of Clifford circuits.
//!
//! Circuits over the gate set {H, P, CNOT} are represented as linear gate
//! lists ([`Genome`]) and bred by a steady-state genetic algorithm
//! ([`evolve`]) against one of two stabilizer-simulable fitness landscapes:
//!
//! * [`toy`] rewards mean bipartite entanglement entropy per unit circuit
//!   depth, with a known analytic optimum of n/8 reached by nesting Bell
//!   pairs around the middle cut;
//! * [`qecc`] treats a circuit as the encoder of a two-codeword code,
//!   scans all 2^n − 1 codeword partners, and rewards the fraction of
//!   weight-1 Pauli errors the best pair can detect and correct
//!   (optionally plus a CSS-structure bonus).
//!
//! Everything downstream rests on exact signed Pauli arithmetic in the
//! symplectic GF(2) representation ([`pauli`]), a sign-tracking stabilizer
//! tableau ([`stab`]), and bit-packed GF(2) elimination ([`bitmat`]).
//! A dense statevector oracle ([`dense`]) provides an independent,
//! exponential-cost second route used to validate the polynomial ones.

pub mod bitmat;
pub mod dense;
pub mod error;
pub mod evolve;
pub mod genome;
pub mod pauli;
pub mod qecc;
pub mod stab;
pub mod toy;

pub use error::{Error, Result};
pub use genome::{Gate, GateSampler, Genome};
pub use pauli::{membership_with_sign, Membership, PauliOperator, SinglePauli};
pub use stab::StabilizerTableau;

/// The deterministic random stream used for every stochastic choice.
///
/// ChaCha8 is seedable from a 64-bit integer and produces the same
/// sequence on every platform and architecture, which the reproducibility
/// contract (byte-identical experiment outputs for a given seed) relies
/// on. All genetic operators take `&mut RngStream` explicitly; nothing in
/// the crate draws from ambient randomness.
pub type RngStream = rand_chacha::ChaCha8Rng;
