//! End-to-end checks of the command-line surface: flag/config-file
//! resolution, the analyze/export-dot/overhead subcommands, output file
//! layout, and the evaluation-budget match between the two search
//! algorithms.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn exe() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qevolve"))
}

fn run_ok(args: &[&str]) -> String {
    let output = exe().args(args).output().unwrap();
    assert!(
        output.status.success(),
        "qevolve {args:?} failed:\n{}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout).unwrap()
}

fn run_err(args: &[&str]) -> Output {
    let output = exe().args(args).output().unwrap();
    assert!(
        !output.status.success(),
        "qevolve {args:?} unexpectedly succeeded"
    );
    output
}

fn write(path: &Path, contents: &str) {
    fs::write(path, contents).unwrap();
}

const SHOR: &str = "qubits 9\nCNOT 0 3\nCNOT 0 6\nH 0\nH 3\nH 6\nCNOT 0 1\nCNOT 0 2\nCNOT 3 4\nCNOT 3 5\nCNOT 6 7\nCNOT 6 8\n";

#[test]
fn config_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.conf");
    write(
        &config,
        "mode = toy\nqubits = 4\nruns = 2\ngenerations = 40\npopulation = 12\nmax-pop = 24\nseed = 7\n",
    );

    let from_file = dir.path().join("from_file");
    run_ok(&[
        "evolve",
        "--config",
        config.to_str().unwrap(),
        "--out",
        from_file.to_str().unwrap(),
    ]);

    let from_flags = dir.path().join("from_flags");
    run_ok(&[
        "evolve",
        "--mode",
        "toy",
        "--qubits",
        "4",
        "--runs",
        "2",
        "--generations",
        "40",
        "--population",
        "12",
        "--max-pop",
        "24",
        "--seed",
        "7",
        "--out",
        from_flags.to_str().unwrap(),
    ]);

    for name in ["run_000.csv", "run_001.csv", "aggregate.csv", "summary.txt"] {
        assert_eq!(
            fs::read(from_file.join(name)).unwrap(),
            fs::read(from_flags.join(name)).unwrap(),
            "{name} differs between config-file and flag invocations"
        );
    }
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.conf");
    write(
        &config,
        "mode = toy\nqubits = 4\nruns = 1\ngenerations = 40\npopulation = 12\nmax-pop = 24\nseed = 7\n",
    );
    let out = dir.path().join("out");
    run_ok(&[
        "evolve",
        "--config",
        config.to_str().unwrap(),
        "--seed",
        "99",
        "--out",
        out.to_str().unwrap(),
    ]);
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.contains("seed = 99"), "flag did not win:\n{summary}");
}

#[test]
fn config_file_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.conf");
    write(&config, "mode = toy\nqubits == 4\n");
    let out = run_err(&[
        "evolve",
        "--config",
        config.to_str().unwrap(),
        "--out",
        "/tmp/unused",
    ]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2"), "no line number in: {stderr}");
}

#[test]
fn analyze_reports_shor_code() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("shor.circuit");
    write(&file, SHOR);
    let stdout = run_ok(&["analyze", file.to_str().unwrap(), "--mode", "qecc"]);
    assert!(stdout.contains("circuit: 11 gate(s) on 9 qubits, depth 5"));
    assert!(stdout.contains("corrigibility C = 1"));
    assert!(stdout.contains("css degree = 1"));
    assert!(stdout.contains("fitness = 995"));
    assert!(stdout.contains("syndrome table"));
    assert!(stdout.contains("XIIIIIIII,"));
}

#[test]
fn analyze_toy_mode_prints_entropy_profile() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bell.circuit");
    write(&file, "qubits 2\nH 0\nCNOT 0 1\n");
    let stdout = run_ok(&["analyze", file.to_str().unwrap(), "--mode", "toy"]);
    assert!(stdout.contains("S(1) = 0"));
    assert!(stdout.contains("S(2) = 1"));
    assert!(stdout.contains("mean entropy = 0.5"));
    assert!(stdout.contains("fitness (mean entropy / depth) = 0.25"));
}

#[test]
fn analyze_handles_empty_circuit() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("empty.circuit");
    write(&file, "qubits 3\n");
    let stdout = run_ok(&["analyze", file.to_str().unwrap(), "--mode", "toy"]);
    assert!(stdout.contains("0 gate(s) on 3 qubits"));
}

#[test]
fn analyze_rejects_malformed_circuit_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.circuit");
    write(&file, "qubits 3\nH 0\nCNOT 1\n");
    let out = run_err(&["analyze", file.to_str().unwrap(), "--mode", "toy"]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 3"), "no line number in: {stderr}");
}

#[test]
fn export_dot_renders_interaction_graph() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bell.circuit");
    write(&file, "qubits 3\nH 0\nCNOT 0 1\nCNOT 1 2\nCNOT 0 1\n");
    let stdout = run_ok(&["export-dot", file.to_str().unwrap()]);
    assert!(stdout.starts_with("graph"));
    assert!(stdout.trim_end().ends_with('}'));
    // one node per qubit, one edge per coupled pair (deduplicated)
    for node in ["q0;", "q1;", "q2;"] {
        assert!(stdout.contains(node), "missing {node} in:\n{stdout}");
    }
    assert_eq!(stdout.matches("q0 -- q1").count(), 1);
    assert_eq!(stdout.matches("q1 -- q2").count(), 1);
}

#[test]
fn overhead_wording() {
    let saturated = run_ok(&["overhead", "5", "1"]);
    assert!(saturated.contains("errors of weight 1..=1 on 5 qubits: 15"));
    assert!(saturated.contains("syndromes required (errors plus the clean state): 16"));
    assert!(saturated.contains("2^(5-1) = 16"));
    assert!(saturated.contains("saturated"));

    let violated = run_ok(&["overhead", "4", "1"]);
    assert!(violated.contains("violated"));

    let slack = run_ok(&["overhead", "9", "1"]);
    assert!(slack.contains("errors of weight 1..=1 on 9 qubits: 27"));
    assert!(slack.contains("satisfied with slack"));
}

#[test]
fn random_search_budget_matches_evolve() {
    let dir = tempfile::tempdir().unwrap();
    let ga_out = dir.path().join("ga");
    let rs_out = dir.path().join("rs");
    let common = [
        "--mode",
        "toy",
        "--qubits",
        "4",
        "--runs",
        "1",
        "--generations",
        "30",
        "--population",
        "10",
        "--max-pop",
        "20",
        "--seed",
        "5",
    ];
    let mut args = vec!["evolve"];
    args.extend_from_slice(&common);
    args.extend_from_slice(&["--out", ga_out.to_str().unwrap()]);
    run_ok(&args);
    let mut args = vec!["random-search"];
    args.extend_from_slice(&common);
    args.extend_from_slice(&["--out", rs_out.to_str().unwrap()]);
    let rs_stdout = run_ok(&args);
    assert!(rs_stdout.contains("budget-matched generations = 34"));

    let evaluations = |path: &Path| -> u64 {
        let summary = fs::read_to_string(path.join("summary.txt")).unwrap();
        let row = summary
            .lines()
            .skip_while(|l| !l.starts_with("run "))
            .nth(1)
            .unwrap();
        row.split_whitespace().nth(2).unwrap().parse().unwrap()
    };
    let ga = evaluations(&ga_out);
    let rs = evaluations(&rs_out);
    assert_eq!(ga, 10 + 2 * 30);
    assert_eq!(ga, rs, "evaluation budgets diverge: GA {ga} vs RS {rs}");
}

#[test]
fn adjacency_restricts_cnot_gates() {
    let dir = tempfile::tempdir().unwrap();
    let adjacency = dir.path().join("line.adj");
    write(&adjacency, "# 4-qubit line\n0 1\n1 2\n2 3\n");
    let out = dir.path().join("out");
    run_ok(&[
        "evolve",
        "--mode",
        "toy",
        "--qubits",
        "4",
        "--runs",
        "2",
        "--generations",
        "60",
        "--population",
        "20",
        "--max-pop",
        "40",
        "--seed",
        "3",
        "--adjacency",
        adjacency.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.contains("adjacency = 3 edges"), "{summary}");
    let allowed = [(0usize, 1usize), (1, 2), (2, 3)];
    for run in 0..2 {
        let best = fs::read_to_string(out.join(format!("best_{run:03}.circuit"))).unwrap();
        for line in best.lines().filter(|l| l.starts_with("CNOT")) {
            let mut fields = line.split_whitespace().skip(1);
            let c: usize = fields.next().unwrap().parse().unwrap();
            let t: usize = fields.next().unwrap().parse().unwrap();
            assert!(
                allowed.contains(&(c.min(t), c.max(t))),
                "gate off the line graph: {line}"
            );
        }
    }
}

#[test]
fn normalize_adds_scaled_aggregate_column() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    run_ok(&[
        "evolve",
        "--mode",
        "toy",
        "--qubits",
        "4",
        "--runs",
        "1",
        "--generations",
        "10",
        "--population",
        "10",
        "--max-pop",
        "20",
        "--seed",
        "2",
        "--normalize",
        "0.5",
        "--out",
        out.to_str().unwrap(),
    ]);
    let aggregate = fs::read_to_string(out.join("aggregate.csv")).unwrap();
    let mut lines = aggregate.lines();
    assert_eq!(
        lines.next().unwrap(),
        "generation,mean_best_fitness,mean_best_fitness_normalized"
    );
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 3);
        let raw: f64 = fields[1].parse().unwrap();
        let scaled: f64 = fields[2].parse().unwrap();
        assert!((scaled - raw / 0.5).abs() < 1e-12);
    }
}

#[test]
fn run_csv_has_phenotype_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    run_ok(&[
        "evolve",
        "--mode",
        "qecc",
        "--qubits",
        "3",
        "--runs",
        "1",
        "--generations",
        "5",
        "--population",
        "6",
        "--max-pop",
        "12",
        "--seed",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    let csv = fs::read_to_string(out.join("run_000.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert_eq!(
        header,
        "generation,best_fitness,mean_fitness,best_depth,C,CSS,depth,best_pair"
    );
    assert_eq!(csv.lines().count(), 1 + 6); // header + generations 0..=5
}

#[test]
fn missing_required_keys_are_reported_by_name() {
    let out = run_err(&["evolve", "--mode", "toy", "--out", "/tmp/unused"]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("qubits"), "missing key not named: {stderr}");
}
