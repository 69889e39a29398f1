//! Error-correction fitness: treat a circuit as an encoder, enumerate
//! candidate codeword pairs, build syndrome tables, and score how close
//! the induced two-dimensional code comes to correcting every
//! single-qubit error.
//!
//! For an encoder U on n qubits the reference codeword is
//! |c0⟩ = U|0…0⟩, stabilized by the n signed generators S_q = U Z_q U†.
//! Each nonzero bitstring b picks a partner codeword |c_b⟩ = X̄_b|c0⟩,
//! where X̄_b multiplies the conjugated bit-flips X̄_j = U X_j U† over
//! the set bits of b; X̄_b anticommutes with at least one S_q, which
//! makes the pair orthogonal. The joint stabilizer of the pair has n−1
//! generators, found by pivoting away the anticommuting part; syndromes
//! of the 3n single-qubit errors against those generators classify each
//! error as detectable or not, and equal-syndrome errors are checked for
//! degeneracy. The corrigibility degree
//!
//! ```text
//! C = (|E| − e_und − e_unc) / |E|
//! ```
//!
//! reaches 1 exactly when the pair is a distance-3 code for the error
//! set. Fitness is w·C − D (+ w′·CSS in color mode), maximized over all
//! 2^n − 1 pairs with ties resolved to the smallest b.
//!
//! The degeneracy test for two errors sharing a syndrome asks whether
//! E_i·E_j acts as a phase on each codeword — equivalently, commutes
//! with every S_q — so error pairs that differ only by a stabilizer (or
//! by a phase on each codeword separately) do not count as confusions.
//! A stricter literal test (E_i·E_j must be a +1 element of the joint
//! stabilizer group) is available behind [`QeccOptions`].

use crate::bitmat::BinaryMatrix;
use crate::evolve::{Evaluation, FitnessEvaluator};
use crate::genome::Genome;
use crate::pauli::{membership_with_sign, Membership, PauliOperator, SinglePauli};
use crate::stab::{simulate, StabilizerTableau};
use crate::{Error, Result};

/// Pair scans grow as 2^n; this keeps a single evaluation bounded.
pub const MAX_QECC_QUBITS: usize = 16;

/// The n conjugated bit-flip operators X̄_j = U X_j U† of an encoder,
/// closed under signed products indexed by bitstrings.
#[derive(Clone, Debug)]
pub struct LogicalXFamily {
    n: usize,
    xbars: Vec<PauliOperator>,
}

impl LogicalXFamily {
    /// Conjugates each single-qubit X through the circuit.
    pub fn from_genome(genome: &Genome) -> Self {
        LogicalXFamily::from_tableau(&simulate(genome))
    }

    /// Reads the family off a simulated tableau: the destabilizer rows
    /// are exactly the conjugated X_j.
    pub fn from_tableau(tab: &StabilizerTableau) -> Self {
        LogicalXFamily {
            n: tab.n_qubits(),
            xbars: tab.destabilizers().to_vec(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    /// X̄_j for one input qubit.
    pub fn single(&self, j: usize) -> &PauliOperator {
        &self.xbars[j]
    }

    /// X̄_b: the signed product of X̄_j over the set bits of b, lowest
    /// index leftmost (the factors commute, so any order gives the same
    /// operator; the convention only fixes the evaluation path).
    pub fn product(&self, b: u64) -> PauliOperator {
        assert!(b < (1u64 << self.n), "pair index out of range");
        let mut out = PauliOperator::identity(self.n);
        for j in 0..self.n {
            if (b >> j) & 1 == 1 {
                out = out.multiply(&self.xbars[j]);
            }
        }
        out
    }
}

/// Joint stabilizer generators of the codeword pair {|c0⟩, X̄|c0⟩}.
///
/// The first c0 generator anticommuting with `xbar` becomes the pivot;
/// every other anticommuting generator is multiplied by the pivot (the
/// product commutes), and the pivot is dropped. The n−1 survivors
/// commute with `xbar`, stabilize |c0⟩ with sign +, and generate the
/// full group fixing both codewords.
///
/// Errors with [`Error::LogicalFixesCodeword`] when `xbar` commutes
/// with every generator — impossible for X̄_b with b ≠ 0, so hitting it
/// means the inputs were not an encoder's stabilizers and logical
/// family.
pub fn common_stabilizer(
    c0_stabilizers: &[PauliOperator],
    xbar: &PauliOperator,
) -> Result<Vec<PauliOperator>> {
    let pivot_index = c0_stabilizers
        .iter()
        .position(|g| !g.commutes_with(xbar))
        .ok_or(Error::LogicalFixesCodeword)?;
    let pivot = &c0_stabilizers[pivot_index];
    let mut out = Vec::with_capacity(c0_stabilizers.len().saturating_sub(1));
    for (i, g) in c0_stabilizers.iter().enumerate() {
        if i == pivot_index {
            continue;
        }
        if g.commutes_with(xbar) {
            out.push(g.clone());
        } else {
            out.push(g.multiply(pivot));
        }
    }
    Ok(out)
}

/// Syndrome of an error against a generator list: bit i is set iff the
/// error anticommutes with generator i.
pub fn syndrome_of(error: &PauliOperator, generators: &[PauliOperator]) -> u64 {
    assert!(generators.len() <= 64, "too many generators for a u64 syndrome");
    let mut s = 0u64;
    for (i, g) in generators.iter().enumerate() {
        if !error.commutes_with(g) {
            s |= 1 << i;
        }
    }
    s
}

/// Renders a syndrome as a bitstring, generator 0 leftmost.
pub fn syndrome_bitstring(s: u64, generator_count: usize) -> String {
    (0..generator_count)
        .map(|i| if (s >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Report knobs. Defaults reproduce the headline corrigibility metric.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct QeccOptions {
    /// Degenerate-pair test requires the error product to be a literal
    /// +1 member of the joint stabilizer group, instead of only acting
    /// as a phase on each codeword.
    pub strict_degeneracy: bool,
    /// Excludes zero-syndrome errors that are +1 members of the joint
    /// stabilizer group (they fix both codewords outright) from e_und.
    pub exclude_harmless_undetectable: bool,
}

/// One codeword pair of an encoder.
#[derive(Clone, Debug)]
pub struct CodePair {
    /// The bitstring b selecting the partner codeword.
    pub pair_index: u64,
    /// The n signed stabilizer generators of |c0⟩.
    pub c0_stabilizers: Vec<PauliOperator>,
    /// X̄_b mapping |c0⟩ to the partner.
    pub xbar: PauliOperator,
    /// The n−1 joint stabilizer generators of the pair.
    pub common: Vec<PauliOperator>,
}

impl CodePair {
    pub fn build(
        pair_index: u64,
        c0_stabilizers: Vec<PauliOperator>,
        xbar: PauliOperator,
    ) -> Result<CodePair> {
        let common = common_stabilizer(&c0_stabilizers, &xbar)?;
        Ok(CodePair {
            pair_index,
            c0_stabilizers,
            xbar,
            common,
        })
    }

    pub fn syndrome_report(
        &self,
        errors: &[PauliOperator],
        options: QeccOptions,
    ) -> Result<SyndromeReport> {
        build_syndrome_report(&self.c0_stabilizers, &self.common, errors, options)
    }
}

/// Outcome of pushing an error set through one pair's syndrome table.
#[derive(Clone, Debug, PartialEq)]
pub struct SyndromeReport {
    /// Per-error syndromes, parallel to the input error list.
    pub syndromes: Vec<u64>,
    /// Errors no syndrome reacts to.
    pub e_und: usize,
    /// Errors sharing a syndrome with a genuinely different error.
    pub e_unc: usize,
    /// (|E| − e_und − e_unc)/|E| ∈ [0, 1].
    pub corrigibility: f64,
}

/// Classifies every error against one codeword pair.
///
/// An all-zero syndrome means undetectable. Errors sharing a nonzero
/// syndrome are pairwise tested: the product E_i·E_j must fix each
/// codeword up to a phase (commute with all c0 stabilizers) — or, in
/// strict mode, be a literal +1 joint-stabilizer member. One failing
/// pair marks the entire syndrome class uncorrectable.
pub fn build_syndrome_report(
    c0_stabilizers: &[PauliOperator],
    common: &[PauliOperator],
    errors: &[PauliOperator],
    options: QeccOptions,
) -> Result<SyndromeReport> {
    let syndromes: Vec<u64> = errors.iter().map(|e| syndrome_of(e, common)).collect();

    let mut e_und = 0;
    for (i, error) in errors.iter().enumerate() {
        if syndromes[i] != 0 {
            continue;
        }
        let harmless = options.exclude_harmless_undetectable
            && membership_with_sign(error, common)? == Membership::MemberPlus;
        if !harmless {
            e_und += 1;
        }
    }

    // group error indices by syndrome; the sort is stable so classes
    // keep the enumeration order and reruns are identical
    let mut order: Vec<usize> = (0..errors.len()).collect();
    order.sort_by_key(|&i| syndromes[i]);
    let mut e_unc = 0;
    let mut start = 0;
    while start < order.len() {
        let syndrome = syndromes[order[start]];
        let mut end = start + 1;
        while end < order.len() && syndromes[order[end]] == syndrome {
            end += 1;
        }
        let class = &order[start..end];
        if syndrome != 0 && class.len() >= 2 {
            'class: for (k, &i) in class.iter().enumerate() {
                for &j in &class[k + 1..] {
                    let product = errors[i].multiply(&errors[j]);
                    let degenerate = if options.strict_degeneracy {
                        membership_with_sign(&product, common)? == Membership::MemberPlus
                    } else {
                        syndrome_of(&product, c0_stabilizers) == 0
                    };
                    if !degenerate {
                        e_unc += class.len();
                        break 'class;
                    }
                }
            }
        }
        start = end;
    }

    let total = errors.len();
    Ok(SyndromeReport {
        syndromes,
        e_und,
        e_unc,
        corrigibility: (total - e_und - e_unc) as f64 / total as f64,
    })
}

/// Fraction of a generating set expressible in pure-X / pure-Z form:
/// with m independent generators, k_Z = m − rank(X block) counts an
/// independent pure-Z subset, k_X = m − rank(Z block) a pure-X one, and
/// the degree is (k_X + k_Z)/m. Invariant under change of generating
/// set, 1.0 exactly for CSS codes.
pub fn css_degree(generators: &[PauliOperator]) -> Result<f64> {
    assert!(!generators.is_empty(), "need at least one generator");
    let m = generators.len();
    let n = generators[0].n_qubits();
    let mut sym = BinaryMatrix::zeros(m, 2 * n);
    let mut x_block = BinaryMatrix::zeros(m, n);
    let mut z_block = BinaryMatrix::zeros(m, n);
    for (r, g) in generators.iter().enumerate() {
        assert_eq!(g.n_qubits(), n, "qubit count mismatch");
        for q in 0..n {
            if g.x_bit(q) {
                sym.set(r, q, true);
                x_block.set(r, q, true);
            }
            if g.z_bit(q) {
                sym.set(r, n + q, true);
                z_block.set(r, q, true);
            }
        }
    }
    if sym.rank() < m {
        return Err(Error::DependentGenerators);
    }
    let k_z = m - x_block.rank();
    let k_x = m - z_block.rank();
    Ok((k_x + k_z) as f64 / m as f64)
}

/// What the error-correction landscape measures about one circuit.
#[derive(Clone, Debug, PartialEq)]
pub struct QeccPhenotype {
    /// Corrigibility of the best pair.
    pub corrigibility: f64,
    /// CSS degree of the best pair's joint stabilizer.
    pub css_degree: f64,
    pub depth: usize,
    /// The argmax pair bitstring (smallest on ties).
    pub best_pair: u64,
    pub fitness: f64,
}

/// Evaluator scoring encoders by max-over-pairs w·C − D (+ w′·CSS).
#[derive(Clone, Debug)]
pub struct QeccEvaluator {
    n_qubits: usize,
    w: f64,
    w_prime: f64,
    options: QeccOptions,
    errors: Vec<PauliOperator>,
}

impl QeccEvaluator {
    /// Plain corrigibility landscape: fitness = w·C − D.
    pub fn new(n_qubits: usize, w: f64) -> Result<Self> {
        QeccEvaluator::with_css_weight(n_qubits, w, 0.0)
    }

    /// Color-mode landscape: fitness = w·C − D + w′·CSS.
    pub fn with_css_weight(n_qubits: usize, w: f64, w_prime: f64) -> Result<Self> {
        if n_qubits < 2 {
            return Err(Error::TooFewQubits(n_qubits));
        }
        if n_qubits > MAX_QECC_QUBITS {
            return Err(Error::InvalidConfig(format!(
                "pair scan is exponential; {n_qubits} qubits exceeds the cap of {MAX_QECC_QUBITS}"
            )));
        }
        Ok(QeccEvaluator {
            n_qubits,
            w,
            w_prime,
            options: QeccOptions::default(),
            errors: enumerate_weight_t_errors(n_qubits, 1)?,
        })
    }

    pub fn with_options(mut self, options: QeccOptions) -> Self {
        self.options = options;
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// The error set being scored (weight-1 by construction).
    pub fn errors(&self) -> &[PauliOperator] {
        &self.errors
    }

    /// Scores one encoder over all 2^n − 1 codeword pairs.
    pub fn evaluate_full(&self, genome: &Genome) -> QeccPhenotype {
        let n = self.n_qubits;
        assert_eq!(genome.n_qubits(), n, "qubit count mismatch");
        let tab = simulate(genome);
        let c0 = tab.stabilizers();
        let xbars = tab.destabilizers();
        let depth = genome.depth();

        // memoized signed products over the pair-bitstring lattice:
        // X̄_b = X̄_lsb(b) · X̄_(b minus lsb), factors in ascending order
        let mut xtab: Vec<PauliOperator> = Vec::with_capacity(1 << n);
        xtab.push(PauliOperator::identity(n));
        for b in 1..(1usize << n) {
            let j = b.trailing_zeros() as usize;
            xtab.push(xbars[j].multiply(&xtab[b & (b - 1)]));
        }

        let mut best: Option<(f64, u64, f64, f64)> = None;
        for b in 1..(1u64 << n) {
            let common = common_stabilizer(c0, &xtab[b as usize])
                .expect("a nontrivial logical X anticommutes with some stabilizer");
            let report = build_syndrome_report(c0, &common, &self.errors, self.options)
                .expect("joint stabilizer generators are independent by construction");
            let css = if self.w_prime != 0.0 {
                css_degree(&common)
                    .expect("joint stabilizer generators are independent by construction")
            } else {
                0.0
            };
            let fitness =
                self.w * report.corrigibility - depth as f64 + self.w_prime * css;
            if best.is_none_or(|(f, ..)| fitness > f) {
                best = Some((fitness, b, report.corrigibility, css));
            }
        }
        let (fitness, best_pair, corrigibility, mut css) = best.unwrap();
        if self.w_prime == 0.0 {
            // not part of the score; computed for the winner's report
            let common = common_stabilizer(c0, &xtab[best_pair as usize])
                .expect("a nontrivial logical X anticommutes with some stabilizer");
            css = css_degree(&common)
                .expect("joint stabilizer generators are independent by construction");
        }
        QeccPhenotype {
            corrigibility,
            css_degree: css,
            depth,
            best_pair,
            fitness,
        }
    }

    /// The full pair object and syndrome report for one chosen b, for
    /// inspection and table export.
    pub fn report_for_pair(&self, genome: &Genome, b: u64) -> Result<(CodePair, SyndromeReport)> {
        assert_eq!(genome.n_qubits(), self.n_qubits, "qubit count mismatch");
        if b == 0 || b >= (1u64 << self.n_qubits) {
            return Err(Error::InvalidConfig(format!(
                "pair index {b} out of range (1..{})",
                (1u64 << self.n_qubits) - 1
            )));
        }
        let tab = simulate(genome);
        let family = LogicalXFamily::from_tableau(&tab);
        let pair = CodePair::build(b, tab.stabilizers().to_vec(), family.product(b))?;
        let report = pair.syndrome_report(&self.errors, self.options)?;
        Ok((pair, report))
    }
}

impl FitnessEvaluator for QeccEvaluator {
    fn evaluate(&self, genome: &Genome) -> Evaluation {
        let p = self.evaluate_full(genome);
        Evaluation {
            fitness: p.fitness,
            phenotype: vec![
                p.corrigibility,
                p.css_degree,
                p.depth as f64,
                p.best_pair as f64,
            ],
        }
    }

    fn phenotype_columns(&self) -> &'static [&'static str] {
        &["C", "CSS", "depth", "best_pair"]
    }
}

/// One-shot scoring of a single circuit.
pub fn qecc_fitness(genome: &Genome, w: f64, w_prime: f64) -> Result<QeccPhenotype> {
    Ok(QeccEvaluator::with_css_weight(genome.n_qubits(), w, w_prime)?.evaluate_full(genome))
}

/// Number of weight-exactly-t Pauli errors on n qubits: C(n,t)·3^t,
/// exact.
pub fn error_count(n: usize, t: usize) -> Result<u128> {
    check_weight(n, t)?;
    let mut binomial: u128 = 1;
    for i in 1..=t {
        // partial products of C(n,t) stay integral in this order
        binomial = binomial * (n - t + i) as u128 / i as u128;
    }
    Ok(binomial * 3u128.pow(t as u32))
}

/// Number of errors of weight between 1 and t inclusive.
pub fn errors_up_to(n: usize, t: usize) -> Result<u128> {
    check_weight(n, t)?;
    let mut total = 0u128;
    for i in 1..=t {
        total += error_count(n, i)?;
    }
    Ok(total)
}

/// Whether n qubits offer enough distinct syndromes for every error of
/// weight ≤ t plus the clean state: s(n,t) + 1 ≤ 2^(n−1).
pub fn overhead_ok(n: usize, t: usize) -> Result<bool> {
    let s = errors_up_to(n, t)?;
    Ok(s + 1 <= 1u128 << (n - 1))
}

fn check_weight(n: usize, t: usize) -> Result<()> {
    if n > 64 {
        return Err(Error::InvalidConfig(format!(
            "overhead arithmetic supports at most 64 qubits, got {n}"
        )));
    }
    if t < 1 || t > n {
        return Err(Error::WeightOutOfRange {
            weight: t,
            n_qubits: n,
        });
    }
    Ok(())
}

/// All weight-exactly-t Pauli errors, sign +, in a fixed order: qubit
/// subsets lexicographically, and for each subset the letters count
/// X<Y<Z with the first (lowest-index) slot most significant.
pub fn enumerate_weight_t_errors(n: usize, t: usize) -> Result<Vec<PauliOperator>> {
    check_weight(n, t)?;
    let letters = [SinglePauli::X, SinglePauli::Y, SinglePauli::Z];
    let mut out = Vec::new();
    let mut combo: Vec<usize> = (0..t).collect();
    loop {
        let assignments = 3usize.pow(t as u32);
        for code in 0..assignments {
            let mut p = PauliOperator::identity(n);
            let mut rest = code;
            for slot in (0..t).rev() {
                p.set_letter(combo[slot], letters[rest % 3]);
                rest /= 3;
            }
            out.push(p);
        }
        // next lexicographic t-combination of 0..n
        let mut i = t;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if combo[i] != i + n - t {
                break;
            }
        }
        combo[i] += 1;
        for j in i + 1..t {
            combo[j] = combo[j - 1] + 1;
        }
    }
}
