//! Brute-force statevector simulation, used as an independent oracle.
//!
//! Everything here recomputes from first principles what the tableau
//! machinery in `stab` computes symbolically: states as 2^n complex
//! amplitudes, gates as explicit matrix actions, entanglement entropy as
//! eigenvalues of a reduced density matrix. Tests cross-check the two
//! routes against each other; production code paths never call into this
//! module.
//!
//! Basis convention: amplitude index `i` holds qubit q's bit at
//! `(i >> q) & 1`, matching the 0-based qubit numbering everywhere else.

use nalgebra::{Complex, DMatrix};

use crate::genome::{Gate, Genome};
use crate::pauli::PauliOperator;
use crate::{Error, Result};

type C64 = Complex<f64>;

/// Hard cap on oracle size; 2^10 amplitudes keep the checks instant.
pub const MAX_ORACLE_QUBITS: usize = 10;

fn check_size(n: usize) -> Result<()> {
    if n > MAX_ORACLE_QUBITS {
        return Err(Error::DenseOracleTooLarge {
            n_qubits: n,
            max: MAX_ORACLE_QUBITS,
        });
    }
    Ok(())
}

/// Runs the circuit on |0…0⟩ amplitude by amplitude.
pub fn statevector(genome: &Genome) -> Result<Vec<C64>> {
    let n = genome.n_qubits();
    check_size(n)?;
    let dim = 1usize << n;
    let mut state = vec![C64::new(0.0, 0.0); dim];
    state[0] = C64::new(1.0, 0.0);
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    for &gate in genome.gates() {
        match gate {
            Gate::H(q) => {
                let m = 1usize << q;
                for i in 0..dim {
                    if i & m == 0 {
                        let a = state[i];
                        let b = state[i | m];
                        state[i] = (a + b) * inv_sqrt2;
                        state[i | m] = (a - b) * inv_sqrt2;
                    }
                }
            }
            Gate::P(q) => {
                let m = 1usize << q;
                for (i, amp) in state.iter_mut().enumerate() {
                    if i & m != 0 {
                        *amp *= C64::new(0.0, 1.0);
                    }
                }
            }
            Gate::Cnot { control, target } => {
                let mc = 1usize << control;
                let mt = 1usize << target;
                for i in 0..dim {
                    if i & mc != 0 && i & mt == 0 {
                        state.swap(i, i | mt);
                    }
                }
            }
        }
    }
    Ok(state)
}

/// Applies a signed Pauli operator to a statevector.
///
/// In XZ normal form the operator is i^e · X^x · Z^z with
/// e = phase_exp + (#Y), so each basis amplitude picks up i^e, a Z-parity
/// sign, and moves to the X-flipped index.
pub fn apply_pauli(state: &[C64], p: &PauliOperator) -> Vec<C64> {
    let n = p.n_qubits();
    assert!(n <= MAX_ORACLE_QUBITS, "operator too large for the oracle");
    assert_eq!(state.len(), 1usize << n, "state size mismatch");
    let mut xmask = 0usize;
    let mut zmask = 0usize;
    for q in 0..n {
        if p.x_bit(q) {
            xmask |= 1 << q;
        }
        if p.z_bit(q) {
            zmask |= 1 << q;
        }
    }
    let e = (p.phase_exp() as u32 + p.count_y()) & 3;
    let front = match e {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    };
    let mut out = vec![C64::new(0.0, 0.0); state.len()];
    for (i, &amp) in state.iter().enumerate() {
        let sign = if (i & zmask).count_ones() & 1 == 0 {
            1.0
        } else {
            -1.0
        };
        out[i ^ xmask] = front * sign * amp;
    }
    out
}

/// Bipartite entanglement entropy in bits across cut position `cut`
/// (1-based, same convention as `stab::entropy_profile`: cut x splits
/// {0,…,x−2} from {x−1,…,n−1}).
///
/// Builds the reduced density matrix of the smaller side and sums
/// −λ·log2 λ over its eigenvalues.
pub fn entanglement_entropy(state: &[C64], n: usize, cut: usize) -> f64 {
    assert!(cut >= 1 && cut <= n, "cut out of range");
    assert_eq!(state.len(), 1usize << n, "state size mismatch");
    let low_bits = cut - 1; // qubits 0..cut-2 live in the low bits
    let high_bits = n - cut + 1;
    let (rows, stride, runs) = if low_bits <= high_bits {
        (1usize << low_bits, 1usize, 1usize << high_bits)
    } else {
        (1usize << high_bits, 1usize << low_bits, 1usize << low_bits)
    };
    // rho[r1, r2] = sum over the traced index of psi[..] * conj(psi[..])
    let mut rho = DMatrix::<C64>::zeros(rows, rows);
    let index = |r: usize, t: usize| {
        if stride == 1 {
            // low side kept: i = r + t * 2^{low_bits}
            r + (t << low_bits)
        } else {
            // high side kept: i = t + r * 2^{low_bits}
            t + r * stride
        }
    };
    for r1 in 0..rows {
        for r2 in 0..rows {
            let mut acc = C64::new(0.0, 0.0);
            for t in 0..runs {
                acc += state[index(r1, t)] * state[index(r2, t)].conj();
            }
            rho[(r1, r2)] = acc;
        }
    }
    let eigenvalues = rho.symmetric_eigen().eigenvalues;
    let mut s = 0.0;
    for &lambda in eigenvalues.iter() {
        if lambda > 1e-12 {
            s -= lambda * lambda.log2();
        }
    }
    s
}

/// Simulates the circuit densely and returns the entropy at one cut.
pub fn dense_entropy_oracle(genome: &Genome, cut: usize) -> Result<f64> {
    let state = statevector(genome)?;
    Ok(entanglement_entropy(&state, genome.n_qubits(), cut))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genome::GateSampler;
    use crate::stab::{entropy_profile, simulate};
    use rand::SeedableRng;

    fn circuit(n: usize, gates: &[Gate]) -> Genome {
        Genome::new(n, gates.to_vec()).unwrap()
    }

    fn assert_close(a: C64, b: C64) {
        assert!((a - b).norm() < 1e-12, "{a} vs {b}");
    }

    #[test]
    fn hadamard_makes_plus_state() {
        let s = statevector(&circuit(1, &[Gate::H(0)])).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_close(s[0], C64::new(r, 0.0));
        assert_close(s[1], C64::new(r, 0.0));
    }

    #[test]
    fn phase_gate_rotates_the_one_component() {
        let s = statevector(&circuit(1, &[Gate::H(0), Gate::P(0)])).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_close(s[0], C64::new(r, 0.0));
        assert_close(s[1], C64::new(0.0, r));
    }

    #[test]
    fn bell_state_amplitudes() {
        let s = statevector(&circuit(
            2,
            &[Gate::H(0), Gate::Cnot { control: 0, target: 1 }],
        ))
        .unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_close(s[0], C64::new(r, 0.0));
        assert_close(s[1], C64::new(0.0, 0.0));
        assert_close(s[2], C64::new(0.0, 0.0));
        assert_close(s[3], C64::new(r, 0.0));
    }

    #[test]
    fn oracle_rejects_oversized_circuits() {
        let g = Genome::empty(MAX_ORACLE_QUBITS + 1);
        assert!(matches!(
            statevector(&g),
            Err(Error::DenseOracleTooLarge { .. })
        ));
    }

    #[test]
    fn pauli_action_on_basis_states() {
        // X|0> = |1>, Y|0> = i|1>, Z|1> = -|1>
        let zero = vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        let one = vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
        let x: PauliOperator = "X".parse().unwrap();
        let y: PauliOperator = "Y".parse().unwrap();
        let z: PauliOperator = "Z".parse().unwrap();
        assert_close(apply_pauli(&zero, &x)[1], C64::new(1.0, 0.0));
        assert_close(apply_pauli(&zero, &y)[1], C64::new(0.0, 1.0));
        assert_close(apply_pauli(&one, &z)[1], C64::new(-1.0, 0.0));
        let minus_z: PauliOperator = "-Z".parse().unwrap();
        assert_close(apply_pauli(&one, &minus_z)[1], C64::new(1.0, 0.0));
    }

    #[test]
    fn tableau_stabilizers_fix_the_dense_state() {
        // The strongest cross-check of sign conventions: every stabilizer
        // generator from the symbolic route must satisfy g|psi> = |psi>
        // on the dense route, signs and all.
        let mut rng = crate::RngStream::seed_from_u64(2024);
        for n in 2..=5 {
            let sampler = GateSampler::full(n).unwrap();
            for _ in 0..40 {
                let g = sampler.random_genome(1, 30, &mut rng);
                let state = statevector(&g).unwrap();
                let tab = simulate(&g);
                for gen in tab.stabilizers() {
                    let moved = apply_pauli(&state, gen);
                    for (a, b) in moved.iter().zip(&state) {
                        assert_close(*a, *b);
                    }
                }
            }
        }
    }

    #[test]
    fn state_norm_is_preserved() {
        let mut rng = crate::RngStream::seed_from_u64(77);
        let sampler = GateSampler::full(4).unwrap();
        for _ in 0..50 {
            let g = sampler.random_genome(1, 40, &mut rng);
            let s = statevector(&g).unwrap();
            let norm: f64 = s.iter().map(|a| a.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn rank_entropy_matches_dense_entropy() {
        let mut rng = crate::RngStream::seed_from_u64(4242);
        for n in 2..=6 {
            let sampler = GateSampler::full(n).unwrap();
            for _ in 0..25 {
                let g = sampler.random_genome(1, 35, &mut rng);
                let profile = entropy_profile(&simulate(&g));
                let state = statevector(&g).unwrap();
                for x in 1..=n {
                    let dense = entanglement_entropy(&state, n, x);
                    let ranked = profile.cut(x) as f64;
                    assert!(
                        (dense - ranked).abs() < 1e-9,
                        "n={n} cut={x}: dense {dense} vs rank {ranked}"
                    );
                }
            }
        }
    }
}
