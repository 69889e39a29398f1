//! Signed n-qubit Pauli operators in the symplectic GF(2) representation.
//!
//! An operator is stored as packed x/z bit-vectors plus a power of i:
//!
//! ```text
//! operator = i^phase_exp · L_0 ⊗ L_1 ⊗ … ⊗ L_{n−1}
//! ```
//!
//! with the letter at qubit q determined by its (x_q, z_q) bit pair:
//! (0,0) = I, (1,0) = X, (0,1) = Z, (1,1) = Y. Hermitian operators (every
//! stabilizer generator and error in this crate) carry phase_exp 0 or 2,
//! i.e. sign +1 or −1; odd phases only appear transiently in products such
//! as X·Z = −iY.
//!
//! Commutation is the parity of the symplectic product, so it reduces to
//! word-wise AND/XOR/popcount; products track the exact phase through the
//! XZ normal form. Qubit indices are 0-based everywhere.

use std::fmt;
use std::str::FromStr;

use crate::bitmat::BinaryMatrix;
use crate::{Error, Result};

const WORD_BITS: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

#[inline]
fn bit(q: usize) -> (usize, u64) {
    (q / WORD_BITS, 1u64 << (q % WORD_BITS))
}

/// A single-qubit Pauli letter.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SinglePauli {
    I,
    X,
    Y,
    Z,
}

impl SinglePauli {
    fn bits(self) -> (bool, bool) {
        match self {
            SinglePauli::I => (false, false),
            SinglePauli::X => (true, false),
            SinglePauli::Y => (true, true),
            SinglePauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => SinglePauli::I,
            (true, false) => SinglePauli::X,
            (true, true) => SinglePauli::Y,
            (false, true) => SinglePauli::Z,
        }
    }

    fn to_char(self) -> char {
        match self {
            SinglePauli::I => 'I',
            SinglePauli::X => 'X',
            SinglePauli::Y => 'Y',
            SinglePauli::Z => 'Z',
        }
    }
}

/// A signed Pauli string.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

impl PauliOperator {
    /// The identity on `n` qubits, phase +1.
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "need at least one qubit");
        let w = words_for(n);
        PauliOperator {
            n,
            x: vec![0; w],
            z: vec![0; w],
            phase: 0,
        }
    }

    /// A single letter at `qubit`, identity elsewhere, phase +1.
    pub fn single(n: usize, qubit: usize, letter: SinglePauli) -> Self {
        assert!(qubit < n, "qubit {qubit} out of range for {n} qubits");
        let mut p = PauliOperator::identity(n);
        p.set_letter(qubit, letter);
        p
    }

    /// Builds the operator with the given letters, phase +1.
    pub fn from_letters(letters: &[SinglePauli]) -> Self {
        let mut p = PauliOperator::identity(letters.len());
        for (q, &l) in letters.iter().enumerate() {
            p.set_letter(q, l);
        }
        p
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    /// Exponent of the global i prefactor, mod 4.
    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    /// Flips the overall sign (adds 2 to the phase exponent).
    pub fn negate(&mut self) {
        self.phase = (self.phase + 2) & 3;
    }

    pub fn x_bit(&self, q: usize) -> bool {
        assert!(q < self.n);
        let (w, m) = bit(q);
        self.x[w] & m != 0
    }

    pub fn z_bit(&self, q: usize) -> bool {
        assert!(q < self.n);
        let (w, m) = bit(q);
        self.z[w] & m != 0
    }

    pub fn letter(&self, q: usize) -> SinglePauli {
        SinglePauli::from_bits(self.x_bit(q), self.z_bit(q))
    }

    pub fn set_letter(&mut self, q: usize, letter: SinglePauli) {
        assert!(q < self.n);
        let (w, m) = bit(q);
        let (xb, zb) = letter.bits();
        if xb {
            self.x[w] |= m;
        } else {
            self.x[w] &= !m;
        }
        if zb {
            self.z[w] |= m;
        } else {
            self.z[w] &= !m;
        }
    }

    /// Number of qubits carrying a non-identity letter.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// True for the identity with phase +1.
    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.weight() == 0
    }

    /// Number of Y letters, mod 4 is all callers need.
    pub(crate) fn count_y(&self) -> u32 {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    /// True iff the operators commute; phases are irrelevant. The
    /// symplectic product Σ_q (x_q·z'_q + z_q·x'_q) decides: even means
    /// commute.
    ///
    /// Panics on a qubit-count mismatch.
    pub fn commutes_with(&self, other: &PauliOperator) -> bool {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        let mut acc = 0u32;
        for w in 0..self.x.len() {
            acc ^= (self.x[w] & other.z[w]).count_ones();
            acc ^= (self.z[w] & other.x[w]).count_ones();
        }
        acc & 1 == 0
    }

    /// Group product `self · other` with the exact phase.
    ///
    /// Bits XOR; the phase is composed through the XZ normal form
    /// i^e·X^x·Z^z, where moving Z letters of `self` past X letters of
    /// `other` contributes (−1) per overlapping qubit.
    ///
    /// Panics on a qubit-count mismatch.
    pub fn multiply(&self, other: &PauliOperator) -> PauliOperator {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        let mut e = (self.phase as u32 + self.count_y() + other.phase as u32 + other.count_y()) & 3;
        let mut cross = 0u32;
        for w in 0..self.x.len() {
            cross ^= (self.z[w] & other.x[w]).count_ones() & 1;
        }
        e = (e + 2 * cross) & 3;
        let mut out = PauliOperator {
            n: self.n,
            x: self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect(),
            phase: 0,
        };
        out.phase = ((e + 4 - (out.count_y() & 3)) & 3) as u8;
        out
    }

    // Conjugation by the Clifford generators, p ↦ U p U†. These are the
    // per-row tableau update rules; `stab` applies them to whole tableaux.

    /// H on qubit q: X ↔ Z, Y ↦ −Y.
    pub(crate) fn conj_h(&mut self, q: usize) {
        assert!(q < self.n);
        let (w, m) = bit(q);
        let xb = self.x[w] & m;
        let zb = self.z[w] & m;
        if xb != 0 && zb != 0 {
            self.negate();
        }
        let diff = xb ^ zb;
        self.x[w] ^= diff;
        self.z[w] ^= diff;
    }

    /// P (phase gate) on qubit q: X ↦ Y, Y ↦ −X, Z ↦ Z.
    pub(crate) fn conj_p(&mut self, q: usize) {
        assert!(q < self.n);
        let (w, m) = bit(q);
        if self.x[w] & m != 0 && self.z[w] & m != 0 {
            self.negate();
        }
        self.z[w] ^= self.x[w] & m;
    }

    /// CNOT with the given control and target: X_c ↦ X_c X_t,
    /// Z_t ↦ Z_c Z_t; the sign flips iff x_c ∧ z_t ∧ (x_t ⊕ z_c ⊕ 1).
    pub(crate) fn conj_cnot(&mut self, control: usize, target: usize) {
        assert!(control < self.n && target < self.n && control != target);
        let (wc, mc) = bit(control);
        let (wt, mt) = bit(target);
        let xc = self.x[wc] & mc != 0;
        let zc = self.z[wc] & mc != 0;
        let xt = self.x[wt] & mt != 0;
        let zt = self.z[wt] & mt != 0;
        if xc && zt && (xt == zc) {
            self.negate();
        }
        if xc {
            self.x[wt] ^= mt;
        }
        if zt {
            self.z[wc] ^= mc;
        }
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        for q in 0..self.n {
            write!(f, "{}", self.letter(q).to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOperator({self})")
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    /// Parses the text form: an optional `+`, `-`, `+i`, `-i` prefix
    /// followed by one letter per qubit, qubit 0 leftmost, e.g. `-ZZI`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let (phase, rest) = if let Some(r) = t.strip_prefix("+i") {
            (1u8, r)
        } else if let Some(r) = t.strip_prefix("-i") {
            (3u8, r)
        } else if let Some(r) = t.strip_prefix('+') {
            (0u8, r)
        } else if let Some(r) = t.strip_prefix('-') {
            (2u8, r)
        } else {
            (0u8, t)
        };
        if rest.is_empty() {
            return Err(Error::PauliParse(format!("no letters in {s:?}")));
        }
        let mut letters = Vec::with_capacity(rest.len());
        for ch in rest.chars() {
            letters.push(match ch {
                'I' => SinglePauli::I,
                'X' => SinglePauli::X,
                'Y' => SinglePauli::Y,
                'Z' => SinglePauli::Z,
                _ => return Err(Error::PauliParse(format!("bad letter {ch:?} in {s:?}"))),
            });
        }
        let mut p = PauliOperator::from_letters(&letters);
        p.phase = phase;
        Ok(p)
    }
}

/// Result of a signed group-membership test.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    NotMember,
    /// `p` equals a product of the generators exactly.
    MemberPlus,
    /// `-p` equals a product of the generators (sign off by −1).
    MemberMinus,
}

/// Tests whether `p` lies in the group generated by `generators`, sign
/// included.
///
/// Solves the GF(2) system for a generator combination matching `p`'s
/// symplectic vector; if one exists, multiplies that combination out and
/// compares phases. An odd phase difference (non-Hermitian `p` against a
/// Hermitian product) is reported as `NotMember`.
///
/// The generators are expected to be mutually commuting and Hermitian;
/// a linearly dependent list is an error rather than a guess.
pub fn membership_with_sign(
    p: &PauliOperator,
    generators: &[PauliOperator],
) -> Result<Membership> {
    let n = p.n_qubits();
    for g in generators {
        assert_eq!(g.n_qubits(), n, "qubit count mismatch");
    }
    let m = generators.len();
    if m == 0 {
        return Ok(if p.weight() > 0 {
            Membership::NotMember
        } else {
            match p.phase_exp() {
                0 => Membership::MemberPlus,
                2 => Membership::MemberMinus,
                _ => Membership::NotMember,
            }
        });
    }

    // [ x | z | I ]: the identity block records which original generators
    // each eliminated row is composed of.
    let sym = 2 * n;
    let mut mat = BinaryMatrix::zeros(m, sym + m);
    for (r, g) in generators.iter().enumerate() {
        for q in 0..n {
            if g.x_bit(q) {
                mat.set(r, q, true);
            }
            if g.z_bit(q) {
                mat.set(r, n + q, true);
            }
        }
        mat.set(r, sym + r, true);
    }
    let pivots = mat.reduce_cols(sym);
    if pivots.len() < m {
        return Err(Error::DependentGenerators);
    }

    let mut target = BinaryMatrix::zeros(1, sym + m);
    for q in 0..n {
        if p.x_bit(q) {
            target.set(0, q, true);
        }
        if p.z_bit(q) {
            target.set(0, n + q, true);
        }
    }
    for &(c, r) in &pivots {
        if target.get(0, c) {
            target.xor_row_from(0, &mat, r);
        }
    }
    if !target.row_is_zero_in_cols(0, sym) {
        return Ok(Membership::NotMember);
    }

    let mut product = PauliOperator::identity(n);
    for i in 0..m {
        if target.get(0, sym + i) {
            product = product.multiply(&generators[i]);
        }
    }
    Ok(match (p.phase_exp() + 4 - product.phase_exp()) & 3 {
        0 => Membership::MemberPlus,
        2 => Membership::MemberMinus,
        _ => Membership::NotMember,
    })
}
