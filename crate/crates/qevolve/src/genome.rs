//! Circuit genomes and the genetic operators that act on them.
//!
//! A genome is an ordered list of Clifford gates on a fixed register;
//! row order is application order. Crossover is single-point with
//! independent split points in each parent, mutation either overwrites a
//! uniform row with a fresh uniform gate (drawing the identity deletes
//! the row) or inserts a fresh gate at a uniform position. Both keep all
//! structural invariants: indices in range, no CNOT self-loops.
//!
//! `GateSampler` centralizes gate drawing so CNOT connectivity can be
//! restricted to an adjacency graph without touching any operator logic.

use std::fmt::Write as _;

use rand::Rng;

use crate::{Error, Result};

/// One gate: Hadamard, phase gate, or CNOT, on 0-based qubit indices.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    P(usize),
    Cnot { control: usize, target: usize },
}

impl Gate {
    /// Checks indices against a register of `n` qubits.
    pub fn validate(self, n: usize) -> Result<()> {
        let check = |index: usize| {
            if index < n {
                Ok(())
            } else {
                Err(Error::QubitOutOfRange { index, n_qubits: n })
            }
        };
        match self {
            Gate::H(q) | Gate::P(q) => check(q),
            Gate::Cnot { control, target } => {
                check(control)?;
                check(target)?;
                if control == target {
                    return Err(Error::CnotSelfTarget(control));
                }
                Ok(())
            }
        }
    }

    /// The qubits the gate touches (one or two entries).
    pub fn qubits(self) -> impl Iterator<Item = usize> {
        let (a, b) = match self {
            Gate::H(q) | Gate::P(q) => (q, None),
            Gate::Cnot { control, target } => (control, Some(target)),
        };
        std::iter::once(a).chain(b)
    }
}

/// An ordered gate list on a fixed register. Immutable in practice:
/// genetic operators return fresh genomes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Genome {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Genome {
    /// The empty circuit on `n` qubits.
    pub fn empty(n: usize) -> Self {
        assert!(n >= 1, "need at least one qubit");
        Genome {
            n_qubits: n,
            gates: Vec::new(),
        }
    }

    /// Builds a genome, validating every gate against the register.
    pub fn new(n: usize, gates: Vec<Gate>) -> Result<Self> {
        assert!(n >= 1, "need at least one qubit");
        for &g in &gates {
            g.validate(n)?;
        }
        Ok(Genome { n_qubits: n, gates })
    }

    /// Appends one gate, validating it.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Circuit depth under greedy layering: each gate lands on layer
    /// 1 + max(layer of its qubits); depth is the largest layer used.
    pub fn depth(&self) -> usize {
        let mut qubit_layer = vec![0usize; self.n_qubits];
        let mut depth = 0;
        for &gate in &self.gates {
            let layer = 1 + gate.qubits().map(|q| qubit_layer[q]).max().unwrap();
            for q in gate.qubits() {
                qubit_layer[q] = layer;
            }
            depth = depth.max(layer);
        }
        depth
    }

    /// Relabels qubits: gate index q becomes perm[q]. `perm` must be a
    /// permutation of 0..n.
    pub fn permute_qubits(&self, perm: &[usize]) -> Genome {
        assert_eq!(perm.len(), self.n_qubits, "permutation length mismatch");
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            assert!(p < perm.len() && !seen[p], "not a permutation");
            seen[p] = true;
        }
        let gates = self
            .gates
            .iter()
            .map(|&g| match g {
                Gate::H(q) => Gate::H(perm[q]),
                Gate::P(q) => Gate::P(perm[q]),
                Gate::Cnot { control, target } => Gate::Cnot {
                    control: perm[control],
                    target: perm[target],
                },
            })
            .collect();
        Genome {
            n_qubits: self.n_qubits,
            gates,
        }
    }

    /// Serializes to the line-oriented circuit format (see `parse`).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "qubits {}", self.n_qubits).unwrap();
        for &gate in &self.gates {
            match gate {
                Gate::H(q) => writeln!(out, "H {q}").unwrap(),
                Gate::P(q) => writeln!(out, "P {q}").unwrap(),
                Gate::Cnot { control, target } => {
                    writeln!(out, "CNOT {control} {target}").unwrap()
                }
            }
        }
        out
    }

    /// Parses the circuit format: a `qubits <n>` header, then one gate
    /// per line (`H <q>`, `P <q>`, `CNOT <control> <target>`); `#`
    /// starts a comment; indices are 0-based. Errors carry the 1-based
    /// line number.
    pub fn parse(text: &str) -> Result<Genome> {
        let err = |line: usize, reason: &str| Error::Parse {
            line,
            reason: reason.to_string(),
        };
        let mut genome: Option<Genome> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let keyword = fields.next().unwrap();
            let mut parse_index = |what: &str| -> Result<usize> {
                let field = fields
                    .next()
                    .ok_or_else(|| err(line_no, &format!("missing {what}")))?;
                field
                    .parse::<usize>()
                    .map_err(|_| err(line_no, &format!("bad {what} {field:?}")))
            };
            match keyword {
                "qubits" => {
                    if genome.is_some() {
                        return Err(err(line_no, "duplicate qubits header"));
                    }
                    let n = parse_index("qubit count")?;
                    if n == 0 {
                        return Err(err(line_no, "qubit count must be positive"));
                    }
                    genome = Some(Genome::empty(n));
                }
                "H" | "P" | "CNOT" => {
                    let g = genome
                        .as_mut()
                        .ok_or_else(|| err(line_no, "gate before qubits header"))?;
                    let gate = match keyword {
                        "H" => Gate::H(parse_index("qubit")?),
                        "P" => Gate::P(parse_index("qubit")?),
                        _ => Gate::Cnot {
                            control: parse_index("control")?,
                            target: parse_index("target")?,
                        },
                    };
                    if fields.next().is_some() {
                        return Err(err(line_no, "trailing fields"));
                    }
                    g.push(gate)
                        .map_err(|e| err(line_no, &e.to_string()))?;
                }
                other => {
                    return Err(err(line_no, &format!("unknown keyword {other:?}")));
                }
            }
        }
        genome.ok_or_else(|| err(0, "missing qubits header"))
    }

    /// Emits the interaction topology in DOT syntax: an undirected
    /// graph with one node per qubit and one edge per distinct pair of
    /// CNOT-connected qubits (multiplicity and direction collapsed).
    pub fn to_dot(&self) -> String {
        let mut edges: Vec<(usize, usize)> = self
            .gates
            .iter()
            .filter_map(|&g| match g {
                Gate::Cnot { control, target } => {
                    Some((control.min(target), control.max(target)))
                }
                _ => None,
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let mut out = String::from("graph circuit {\n");
        for q in 0..self.n_qubits {
            writeln!(out, "  q{q};").unwrap();
        }
        for (a, b) in edges {
            writeln!(out, "  q{a} -- q{b};").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// Draws uniform random gates, optionally restricting CNOTs to an
/// adjacency graph.
#[derive(Clone, Debug)]
pub struct GateSampler {
    n_qubits: usize,
    /// `None` = all ordered pairs allowed; `Some` = the sorted, deduped
    /// list of allowed (control, target) pairs (both orientations of
    /// every undirected edge).
    cnot_pairs: Option<Vec<(usize, usize)>>,
}

impl GateSampler {
    /// Sampler over the full gate set with unrestricted connectivity.
    pub fn full(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewQubits(n));
        }
        Ok(GateSampler {
            n_qubits: n,
            cnot_pairs: None,
        })
    }

    /// Sampler whose CNOTs only connect qubits adjacent in `edges`
    /// (undirected; both orientations become eligible).
    pub fn restricted(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewQubits(n));
        }
        let mut pairs = Vec::with_capacity(edges.len() * 2);
        for &(a, b) in edges {
            Gate::Cnot { control: a, target: b }.validate(n)?;
            pairs.push((a, b));
            pairs.push((b, a));
        }
        pairs.sort_unstable();
        pairs.dedup();
        if pairs.is_empty() {
            return Err(Error::InvalidConfig(
                "adjacency graph has no edges".to_string(),
            ));
        }
        Ok(GateSampler {
            n_qubits: n,
            cnot_pairs: Some(pairs),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn random_cnot(&self, rng: &mut impl Rng) -> Gate {
        match &self.cnot_pairs {
            None => {
                let n = self.n_qubits;
                let control = rng.gen_range(0..n);
                let t = rng.gen_range(0..n - 1);
                let target = t + usize::from(t >= control);
                Gate::Cnot { control, target }
            }
            Some(pairs) => {
                let (control, target) = pairs[rng.gen_range(0..pairs.len())];
                Gate::Cnot { control, target }
            }
        }
    }

    /// A gate uniform over {H, P, CNOT} with uniform qubit indices.
    pub fn random_gate(&self, rng: &mut impl Rng) -> Gate {
        match rng.gen_range(0..3) {
            0 => Gate::H(rng.gen_range(0..self.n_qubits)),
            1 => Gate::P(rng.gen_range(0..self.n_qubits)),
            _ => self.random_cnot(rng),
        }
    }

    /// A genome of uniform length in [len_min, len_max] with uniform
    /// gates.
    pub fn random_genome(
        &self,
        len_min: usize,
        len_max: usize,
        rng: &mut impl Rng,
    ) -> Genome {
        assert!(
            1 <= len_min && len_min <= len_max,
            "need 1 <= len_min <= len_max"
        );
        let len = rng.gen_range(len_min..=len_max);
        let gates = (0..len).map(|_| self.random_gate(rng)).collect();
        Genome {
            n_qubits: self.n_qubits,
            gates,
        }
    }

    /// One mutation: with probability 1/2 overwrite a uniform row with a
    /// gate uniform over {I, H, P, CNOT} on fresh uniform qubits (the
    /// identity deletes the row), otherwise insert a fresh gate at a
    /// uniform position. Modify on an empty genome falls through to
    /// insert, so length always changes by exactly −1, 0, or +1.
    pub fn mutate(&self, genome: &Genome, rng: &mut impl Rng) -> Genome {
        debug_assert_eq!(genome.n_qubits, self.n_qubits);
        let mut gates = genome.gates.clone();
        let modify = rng.gen_range(0..2) == 0 && !gates.is_empty();
        if modify {
            let row = rng.gen_range(0..gates.len());
            match rng.gen_range(0..4) {
                0 => {
                    gates.remove(row);
                }
                1 => gates[row] = Gate::H(rng.gen_range(0..self.n_qubits)),
                2 => gates[row] = Gate::P(rng.gen_range(0..self.n_qubits)),
                _ => gates[row] = self.random_cnot(rng),
            }
        } else {
            let pos = rng.gen_range(0..=gates.len());
            gates.insert(pos, self.random_gate(rng));
        }
        Genome {
            n_qubits: self.n_qubits,
            gates,
        }
    }
}

/// Single-point crossover at the given split points: child1 takes a's
/// prefix and b's suffix, child2 the complement. Lengths always sum to
/// len(a) + len(b).
pub fn crossover_at(a: &Genome, b: &Genome, cut_a: usize, cut_b: usize) -> (Genome, Genome) {
    assert_eq!(a.n_qubits, b.n_qubits, "qubit count mismatch");
    assert!(cut_a <= a.len() && cut_b <= b.len(), "cut out of range");
    let mut g1 = Vec::with_capacity(cut_a + b.len() - cut_b);
    g1.extend_from_slice(&a.gates[..cut_a]);
    g1.extend_from_slice(&b.gates[cut_b..]);
    let mut g2 = Vec::with_capacity(cut_b + a.len() - cut_a);
    g2.extend_from_slice(&b.gates[..cut_b]);
    g2.extend_from_slice(&a.gates[cut_a..]);
    (
        Genome {
            n_qubits: a.n_qubits,
            gates: g1,
        },
        Genome {
            n_qubits: a.n_qubits,
            gates: g2,
        },
    )
}

/// Single-point crossover with split points drawn uniformly from
/// {0..len(a)} and {0..len(b)} (a's point first).
pub fn crossover(a: &Genome, b: &Genome, rng: &mut impl Rng) -> (Genome, Genome) {
    let cut_a = rng.gen_range(0..=a.len());
    let cut_b = rng.gen_range(0..=b.len());
    crossover_at(a, b, cut_a, cut_b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn cnot(control: usize, target: usize) -> Gate {
        Gate::Cnot { control, target }
    }

    #[test]
    fn gate_validation() {
        assert!(Gate::H(2).validate(3).is_ok());
        assert_eq!(
            Gate::H(3).validate(3),
            Err(Error::QubitOutOfRange { index: 3, n_qubits: 3 })
        );
        assert_eq!(cnot(1, 1).validate(3), Err(Error::CnotSelfTarget(1)));
        assert!(cnot(0, 2).validate(3).is_ok());
    }

    #[test]
    fn depth_of_small_circuits() {
        assert_eq!(Genome::empty(3).depth(), 0);
        let parallel = Genome::new(2, vec![Gate::H(0), Gate::H(1)]).unwrap();
        assert_eq!(parallel.depth(), 1);
        let chain = Genome::new(2, vec![Gate::H(0), cnot(0, 1), Gate::P(1)]).unwrap();
        assert_eq!(chain.depth(), 3);
    }

    #[test]
    fn depth_never_exceeds_length() {
        let mut rng = crate::RngStream::seed_from_u64(3);
        let sampler = GateSampler::full(5).unwrap();
        for _ in 0..200 {
            let g = sampler.random_genome(1, 30, &mut rng);
            assert!(g.depth() <= g.len());
        }
    }

    #[test]
    fn depth_ignores_order_within_a_layer() {
        let a = Genome::new(4, vec![cnot(0, 1), cnot(2, 3), Gate::H(0)]).unwrap();
        let b = Genome::new(4, vec![cnot(2, 3), cnot(0, 1), Gate::H(0)]).unwrap();
        assert_eq!(a.depth(), b.depth());
        assert_eq!(a.depth(), 2);
    }

    #[test]
    fn text_round_trip() {
        let g = Genome::new(3, vec![Gate::H(0), cnot(0, 2), Gate::P(1)]).unwrap();
        let text = g.to_text();
        assert_eq!(text, "qubits 3\nH 0\nCNOT 0 2\nP 1\n");
        assert_eq!(Genome::parse(&text).unwrap(), g);
    }

    #[test]
    fn parse_accepts_comments_and_blank_lines() {
        let text = "# a comment\nqubits 2\n\nH 0   # trailing comment\n  CNOT 0 1\n";
        let g = Genome::parse(text).unwrap();
        assert_eq!(g.gates(), [Gate::H(0), cnot(0, 1)]);
    }

    #[test]
    fn parse_of_header_only_file_gives_empty_genome() {
        let g = Genome::parse("qubits 4\n").unwrap();
        assert_eq!(g.n_qubits(), 4);
        assert!(g.is_empty());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match Genome::parse("qubits 2\nH 0\nCNOT 1 1\n") {
            Err(Error::Parse { line, reason }) => {
                assert_eq!(line, 3);
                assert!(reason.contains("control"), "{reason}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(
            Genome::parse("H 0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Genome::parse("qubits 2\nSWAP 0 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Genome::parse("qubits 2\nH x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(Genome::parse(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn dot_export_collapses_cnot_multiplicity() {
        let g = Genome::new(3, vec![cnot(0, 1), cnot(1, 0), Gate::H(2)]).unwrap();
        let dot = g.to_dot();
        assert_eq!(
            dot,
            "graph circuit {\n  q0;\n  q1;\n  q2;\n  q0 -- q1;\n}\n"
        );
    }

    #[test]
    fn dot_export_of_gate_free_circuit_lists_isolated_nodes() {
        let dot = Genome::empty(2).to_dot();
        assert_eq!(dot, "graph circuit {\n  q0;\n  q1;\n}\n");
    }

    #[test]
    fn dot_export_of_bell_pairings_is_a_perfect_matching() {
        let mut gates = Vec::new();
        let n = 6;
        for q in 0..n / 2 {
            gates.push(Gate::H(q));
            gates.push(cnot(q, n - 1 - q));
        }
        let dot = Genome::new(n, gates).unwrap().to_dot();
        let edges: Vec<&str> = dot.lines().filter(|l| l.contains("--")).collect();
        assert_eq!(edges, ["  q0 -- q5;", "  q1 -- q4;", "  q2 -- q3;"]);
    }

    #[test]
    fn crossover_at_splices_prefix_and_suffix() {
        let a = Genome::new(2, vec![Gate::H(0), Gate::H(1), Gate::P(0), Gate::P(1)]).unwrap();
        let b = Genome::new(2, vec![cnot(0, 1), cnot(1, 0), Gate::H(0)]).unwrap();
        let (c1, c2) = crossover_at(&a, &b, 2, 1);
        assert_eq!(c1.gates(), [Gate::H(0), Gate::H(1), cnot(1, 0), Gate::H(0)]);
        assert_eq!(c2.gates(), [cnot(0, 1), Gate::P(0), Gate::P(1)]);
    }

    #[test]
    fn crossover_at_boundary_cuts() {
        let a = Genome::new(2, vec![Gate::H(0), Gate::P(1)]).unwrap();
        let b = Genome::new(2, vec![cnot(0, 1)]).unwrap();
        let (c1, c2) = crossover_at(&a, &b, 0, b.len());
        assert_eq!(c1, Genome::empty(2));
        assert_eq!(c2.len(), a.len() + b.len());
        let (c1, _) = crossover_at(&a, &b, a.len(), 0);
        assert_eq!(c1.gates(), [Gate::H(0), Gate::P(1), cnot(0, 1)]);
    }

    #[test]
    fn crossover_conserves_total_length() {
        let mut rng = crate::RngStream::seed_from_u64(8);
        let sampler = GateSampler::full(4).unwrap();
        for _ in 0..500 {
            let a = sampler.random_genome(1, 20, &mut rng);
            let b = sampler.random_genome(1, 20, &mut rng);
            let (c1, c2) = crossover(&a, &b, &mut rng);
            assert_eq!(c1.len() + c2.len(), a.len() + b.len());
        }
    }

    #[test]
    fn mutation_changes_length_by_at_most_one() {
        let mut rng = crate::RngStream::seed_from_u64(21);
        let sampler = GateSampler::full(4).unwrap();
        let mut seen = [false; 3]; // -1, 0, +1
        for _ in 0..500 {
            let g = sampler.random_genome(1, 15, &mut rng);
            let m = sampler.mutate(&g, &mut rng);
            let delta = m.len() as i64 - g.len() as i64;
            assert!((-1..=1).contains(&delta), "delta {delta}");
            seen[(delta + 1) as usize] = true;
            assert!(Genome::new(4, m.gates().to_vec()).is_ok());
        }
        assert_eq!(seen, [true; 3], "all three deltas should occur");
    }

    #[test]
    fn mutating_an_empty_genome_inserts_one_gate() {
        let mut rng = crate::RngStream::seed_from_u64(2);
        let sampler = GateSampler::full(3).unwrap();
        for _ in 0..50 {
            assert_eq!(sampler.mutate(&Genome::empty(3), &mut rng).len(), 1);
        }
    }

    #[test]
    fn sampler_requires_two_qubits() {
        assert_eq!(GateSampler::full(1).unwrap_err(), Error::TooFewQubits(1));
    }

    #[test]
    fn sampled_gates_are_valid_and_roughly_uniform() {
        let mut rng = crate::RngStream::seed_from_u64(17);
        let sampler = GateSampler::full(5).unwrap();
        let mut counts = [0u32; 3];
        let draws = 100_000;
        for _ in 0..draws {
            let gate = sampler.random_gate(&mut rng);
            gate.validate(5).unwrap();
            counts[match gate {
                Gate::H(_) => 0,
                Gate::P(_) => 1,
                Gate::Cnot { .. } => 2,
            }] += 1;
        }
        // chi-square against the uniform 1/3 split, df = 2; 30 is far out
        // in the tail, so only a real bias trips this
        let expected = draws as f64 / 3.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        assert!(chi2 < 30.0, "chi2 = {chi2}, counts {counts:?}");
    }

    #[test]
    fn restricted_sampler_honors_the_adjacency_graph() {
        let mut rng = crate::RngStream::seed_from_u64(31);
        let edges = [(0, 1), (1, 2)];
        let sampler = GateSampler::restricted(4, &edges).unwrap();
        let allowed = [(0, 1), (1, 0), (1, 2), (2, 1)];
        for _ in 0..2000 {
            if let Gate::Cnot { control, target } = sampler.random_gate(&mut rng) {
                assert!(allowed.contains(&(control, target)), "{control}->{target}");
            }
        }
        let g = sampler.random_genome(5, 20, &mut rng);
        let m = sampler.mutate(&g, &mut rng);
        for &gate in m.gates() {
            if let Gate::Cnot { control, target } = gate {
                assert!(allowed.contains(&(control, target)));
            }
        }
    }

    #[test]
    fn restricted_sampler_rejects_bad_edges() {
        assert!(matches!(
            GateSampler::restricted(3, &[(0, 3)]),
            Err(Error::QubitOutOfRange { .. })
        ));
        assert!(matches!(
            GateSampler::restricted(3, &[(1, 1)]),
            Err(Error::CnotSelfTarget(1))
        ));
        assert!(matches!(
            GateSampler::restricted(3, &[]),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn permute_qubits_relabels_every_gate() {
        let g = Genome::new(3, vec![Gate::H(0), cnot(0, 2), Gate::P(1)]).unwrap();
        let p = g.permute_qubits(&[2, 0, 1]);
        assert_eq!(p.gates(), [Gate::H(2), cnot(2, 1), Gate::P(0)]);
    }

    #[test]
    #[should_panic(expected = "not a permutation")]
    fn permute_qubits_rejects_non_permutations() {
        Genome::empty(3).permute_qubits(&[0, 0, 1]);
    }
}
