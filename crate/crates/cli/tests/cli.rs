//! End-to-end tests of the `pbit` binary: artifact shapes, summary lines,
//! exit-code classes, and byte-level determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_pbit")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .current_dir(dir)
        .args(args)
        .output()
        .expect("the binary should launch")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn assert_success(out: &Output) {
    assert!(
        out.status.success(),
        "command failed\nstdout: {}\nstderr: {}",
        stdout_of(out),
        stderr_of(out)
    );
}

/// Data rows of an artifact: comment lines and the column header dropped.
fn data_rows(path: &Path) -> Vec<Vec<String>> {
    let text = fs::read_to_string(path).expect("artifact exists");
    text.lines()
        .filter(|line| !line.starts_with('#') && !line.is_empty())
        .skip(1)
        .map(|line| line.split(',').map(str::to_string).collect())
        .collect()
}

fn write_file(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

const FERROMAGNET: &str =
    r#"{"n":2,"weights":[[0,1,1.0],[1,0,1.0]],"biases":[0.0,0.0],"clamps":[],"symmetric":true}"#;

const THREE_BIT_CHAIN: &str = r#"{"n":3,
  "weights":[[0,1,0.7],[1,0,0.7],[1,2,-0.4],[2,1,-0.4]],
  "biases":[0.2,0.0,-0.3],"clamps":[],"symmetric":true}"#;

const AND_OR_XNOR_TABLE: &str = "A,B,XNOR,AND,OR\n0,0,1,0,0\n0,1,0,0,1\n1,0,0,0,1\n1,1,1,1,1\n";

// ---------------------------------------------------------------------------
// Artifact contents.

#[test]
fn enumerate_writes_every_configuration_with_unit_total_probability() {
    let dir = TempDir::new().unwrap();
    write_file(dir.path(), "net.json", FERROMAGNET);
    let out = run_in(dir.path(), &["enumerate", "--network", "net.json", "--out", "table.csv"]);
    assert_success(&out);
    let rows = data_rows(&dir.path().join("table.csv"));
    assert_eq!(rows.len(), 4);
    let total: f64 = rows.iter().map(|r| r[2].parse::<f64>().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12, "probabilities sum to {total}");
    // Aligned states are favored; the summary names a mode and unit mass.
    let summary = stdout_of(&out);
    assert!(summary.contains("configs=4"), "summary: {summary}");
    assert!(summary.contains("total_probability=1"), "summary: {summary}");
}

#[test]
fn minimal_single_bit_network_is_accepted() {
    let dir = TempDir::new().unwrap();
    write_file(
        dir.path(),
        "one.json",
        r#"{"n":1,"weights":[],"biases":[0],"clamps":[],"symmetric":true}"#,
    );
    let out = run_in(dir.path(), &["enumerate", "--network", "one.json", "--out", "one.csv"]);
    assert_success(&out);
    let rows = data_rows(&dir.path().join("one.csv"));
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert!((row[2].parse::<f64>().unwrap() - 0.5).abs() < 1e-12);
    }
}

/// The summary KL printed by `sample` must agree with the value recomputed
/// from the two artifacts it sits between.
#[test]
fn sample_summary_kl_matches_the_artifacts() {
    let dir = TempDir::new().unwrap();
    write_file(dir.path(), "net.json", THREE_BIT_CHAIN);
    let sample = run_in(
        dir.path(),
        &["sample", "--network", "net.json", "--sweeps", "100000", "--out", "hist.csv"],
    );
    assert_success(&sample);
    let enumerate = run_in(
        dir.path(),
        &["enumerate", "--network", "net.json", "--out", "table.csv"],
    );
    assert_success(&enumerate);

    let hist = data_rows(&dir.path().join("hist.csv"));
    let table = data_rows(&dir.path().join("table.csv"));
    assert_eq!(hist.len(), 8);
    assert_eq!(table.len(), 8);
    let mut kl = 0.0;
    for (h, t) in hist.iter().zip(&table) {
        let p: f64 = h[2].parse().unwrap();
        let q: f64 = t[2].parse().unwrap();
        if p > 0.0 {
            kl += p * (p / q).ln();
        }
    }
    let summary = stdout_of(&sample);
    let printed: f64 = summary
        .split("kl=")
        .nth(1)
        .expect("summary reports a KL")
        .trim()
        .parse()
        .unwrap();
    assert!(
        (printed - kl).abs() < 2e-6,
        "summary says {printed}, artifacts give {kl}"
    );
    assert!(kl < 0.01, "sampling far from the exact law: {kl}");
}

#[test]
fn sampled_histogram_counts_add_up_to_the_snapshots_taken() {
    let dir = TempDir::new().unwrap();
    write_file(dir.path(), "net.json", FERROMAGNET);
    let out = run_in(
        dir.path(),
        &[
            "sample", "--network", "net.json", "--sweeps", "10000", "--chains", "3", "--thin",
            "5", "--out", "hist.csv",
        ],
    );
    assert_success(&out);
    let rows = data_rows(&dir.path().join("hist.csv"));
    let counted: u64 = rows.iter().map(|r| r[1].parse::<u64>().unwrap()).sum();
    assert_eq!(counted, 3 * 10000 / 5);
    assert!(stdout_of(&out).contains("snapshots=6000"));
}

#[test]
fn synthesized_gate_file_round_trips_through_the_parser() {
    let dir = TempDir::new().unwrap();
    write_file(dir.path(), "gate.csv", AND_OR_XNOR_TABLE);
    let out = run_in(
        dir.path(),
        &["synth-gate", "--table", "gate.csv", "--strength", "1.5", "--out", "gate.json"],
    );
    assert_success(&out);
    let text = fs::read_to_string(dir.path().join("gate.json")).unwrap();
    let gate = pbit_core::io::parse_gate(&text).expect("artifact parses");
    assert_eq!(gate.bit_order, ["A", "B", "XNOR", "AND", "OR"]);
    assert_eq!(gate.strength, 1.5);
    assert_eq!(pbit_core::io::serialize_gate(&gate).unwrap(), text);
}

#[test]
fn genetic_reports_one_correlation_per_requested_pair() {
    let dir = TempDir::new().unwrap();
    write_file(
        dir.path(),
        "tree.json",
        r#"{"edges":[["F","C1"],["M","C1"],["F","C2"],["M","C2"]]}"#,
    );
    let out = run_in(
        dir.path(),
        &[
            "genetic", "--tree", "tree.json", "--w", "2", "--sweeps", "50000", "--pairs",
            "C1:C2,F:M", "--out", "corr.csv",
        ],
    );
    assert_success(&out);
    let rows = data_rows(&dir.path().join("corr.csv"));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], "C1:C2");
    assert_eq!(rows[1][0], "F:M");
    let sibling: f64 = rows[0][1].parse().unwrap();
    let spouses: f64 = rows[1][1].parse().unwrap();
    // Siblings of shared parents correlate strongly; the parents themselves
    // are independent founders.
    assert!(sibling > 0.3, "sibling correlation {sibling}");
    assert!(spouses.abs() < 0.1, "founder correlation {spouses}");
}

#[test]
fn rbm_training_loss_curve_starts_at_step_zero_and_descends() {
    let dir = TempDir::new().unwrap();
    write_file(dir.path(), "data.csv", "0,0\n1,1\n");
    let out = run_in(
        dir.path(),
        &[
            "rbm-train", "--data", "data.csv", "--hidden", "4", "--k", "1", "--steps", "500",
            "--lr", "0.2", "--out", "loss.csv",
        ],
    );
    assert_success(&out);
    let rows = data_rows(&dir.path().join("loss.csv"));
    assert_eq!(rows.len(), 501);
    assert_eq!(rows[0][0], "0");
    // Contrastive divergence is stochastic, so individual steps bounce; the
    // curve as a whole must still descend decisively.
    let losses: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    let lowest = losses.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(lowest < 0.5 * losses[0], "never descended: {lowest} from {}", losses[0]);
    assert!(losses[500] < losses[0], "loss went {} -> {}", losses[0], losses[500]);
}

#[test]
fn tsp_rows_hold_complete_tours_with_lengths() {
    let dir = TempDir::new().unwrap();
    // Unit square: every Hamiltonian cycle is one of three lengths; the
    // optimum walks the perimeter (length 4).
    write_file(
        dir.path(),
        "dist.csv",
        "0,1,1.4142135623730951,1\n1,0,1,1.4142135623730951\n1.4142135623730951,1,0,1\n1,1.4142135623730951,1,0\n",
    );
    let out = run_in(
        dir.path(),
        &[
            "tsp", "--distances", "dist.csv", "--runs", "3", "--schedule", "0.1,1.05,20,200",
            "--out", "tours.csv",
        ],
    );
    assert_success(&out);
    let rows = data_rows(&dir.path().join("tours.csv"));
    assert_eq!(rows.len(), 3);
    for row in &rows {
        assert_eq!(row[2], "1", "run produced an invalid tour: {row:?}");
        let cities: Vec<&str> = row[0].split('-').collect();
        assert_eq!(cities.len(), 4);
        assert_eq!(cities[0], "0");
        let length: f64 = row[1].parse().unwrap();
        assert!((length - 4.0).abs() < 1e-9, "non-optimal tour {length}");
    }
    assert!(stdout_of(&out).contains("best length 4"));
}

#[test]
fn pimc_emits_one_row_per_observable() {
    let dir = TempDir::new().unwrap();
    write_file(
        dir.path(),
        "model.json",
        r#"{"n_spins":2,"J":[[0,1,1.0]],"h_z":[0.0,0.0],"gamma":0.5,"beta":1.0}"#,
    );
    let out = run_in(
        dir.path(),
        &["pimc", "--model", "model.json", "--replicas", "10", "--out", "obs.csv"],
    );
    assert_success(&out);
    let rows = data_rows(&dir.path().join("obs.csv"));
    assert_eq!(rows.len(), 3); // sz[0], sz[1], zz[0:1]
    assert_eq!(rows[2][0], "zz[0:1]");
    let zz: f64 = rows[2][1].parse().unwrap();
    assert!((0.6..0.75).contains(&zz), "zz[0:1] = {zz}");
    // Symmetric model: both magnetizations are exactly zero by enumeration.
    assert_eq!(rows[0][1], "0");
    assert_eq!(rows[1][1], "0");
    assert!(stdout_of(&out).contains("exact"));
}

#[test]
fn hw_report_covers_barrier_lifetime_and_weights() {
    let dir = TempDir::new().unwrap();
    write_file(
        dir.path(),
        "hw.json",
        r#"{"magnet":{"h_k":0.05,"h_d":0.0,"m_s":8.0e5,"volume":8.284e-24,"alpha":0.01,
            "temperature":300.0,"attempt_time":1.0e-9,"polarization":0.5},
            "circuit":{"v_dd":1.0,"v_0":0.05,"r_p":5.0e3,"r_ap":1.5e4,"c_0":1.0e-12,
            "c":[1.0e-15,2.0e-15],"g_0":1.0e-6,"g":[]}}"#,
    );
    let out = run_in(dir.path(), &["hw", "--params", "hw.json", "--out", "report.csv"]);
    assert_success(&out);
    let rows = data_rows(&dir.path().join("report.csv"));
    let quantity = |name: &str| -> f64 {
        rows.iter()
            .find(|r| r[0] == name)
            .unwrap_or_else(|| panic!("report lacks {name}"))[1]
            .parse()
            .unwrap()
    };
    assert!((quantity("barrier") - 40.0).abs() < 0.1);
    assert!(quantity("lifetime") > 1e7);
    assert!(quantity("capacitive_weight_exact[1]") > quantity("capacitive_weight_exact[0]"));
    assert_eq!(quantity("capacitive_approx_valid"), 1.0);
    // No magnet drive current given, so no spin-current row.
    assert!(rows.iter().all(|r| r[0] != "spin_current"));
}

// ---------------------------------------------------------------------------
// Provenance headers and determinism.

#[test]
fn artifacts_carry_version_seed_and_config_hash_comments() {
    let dir = TempDir::new().unwrap();
    write_file(dir.path(), "net.json", FERROMAGNET);
    let out = run_in(
        dir.path(),
        &["sample", "--network", "net.json", "--sweeps", "1000", "--out", "hist.csv"],
    );
    assert_success(&out);
    let text = fs::read_to_string(dir.path().join("hist.csv")).unwrap();
    assert!(text.starts_with("# pbit-artifact v1\n"));
    assert!(text.contains("# command: sample\n"));
    assert!(text.contains("# seed: 42\n"));
    let hash_line = text
        .lines()
        .find(|l| l.starts_with("# config-hash: "))
        .expect("artifact records its config hash");
    let digest = hash_line.trim_start_matches("# config-hash: ");
    assert_eq!(digest.len(), 12);
    assert!(digest.chars().all(|c| c.is_ascii_hexdigit()));
}

#[test]
fn reruns_are_byte_identical_and_parameter_changes_are_not() {
    let dir = TempDir::new().unwrap();
    write_file(dir.path(), "net.json", THREE_BIT_CHAIN);
    let args = |out: &'static str, seed: &'static str| {
        vec![
            "sample", "--network", "net.json", "--sweeps", "20000", "--seed", seed, "--out", out,
        ]
    };
    assert_success(&run_in(dir.path(), &args("a.csv", "7")));
    assert_success(&run_in(dir.path(), &args("b.csv", "7")));
    assert_success(&run_in(dir.path(), &args("c.csv", "8")));
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    let b = fs::read(dir.path().join("b.csv")).unwrap();
    let c = fs::read(dir.path().join("c.csv")).unwrap();
    assert_eq!(a, b, "same configuration must reproduce bytes");
    assert_ne!(a, c, "the seed must enter both the chain and the header");
}

#[test]
fn plot_twin_shares_rows_with_the_csv() {
    let dir = TempDir::new().unwrap();
    write_file(dir.path(), "net.json", FERROMAGNET);
    let out = run_in(
        dir.path(),
        &[
            "sample", "--network", "net.json", "--sweeps", "1000", "--out", "hist.csv",
            "--plot", "hist.dat",
        ],
    );
    assert_success(&out);
    let csv = fs::read_to_string(dir.path().join("hist.csv")).unwrap();
    let dat = fs::read_to_string(dir.path().join("hist.dat")).unwrap();
    let csv_data: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    let dat_data: Vec<&str> = dat.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(csv_data.len(), dat_data.len());
    for (c, d) in csv_data.iter().zip(&dat_data) {
        assert_eq!(c.replace(',', " "), **d);
    }
}

// ---------------------------------------------------------------------------
// Exit-code classes: 1 for bad input or usage, 2 for runtime failures.

#[test]
fn unknown_command_exits_with_usage_not_a_runtime_code() {
    let dir = TempDir::new().unwrap();
    let out = run_in(dir.path(), &["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("Usage"), "stderr: {}", stderr_of(&out));
}

#[test]
fn help_and_version_exit_cleanly() {
    let dir = TempDir::new().unwrap();
    let help = run_in(dir.path(), &["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout_of(&help).contains("sample"));
    let version = run_in(dir.path(), &["--version"]);
    assert_eq!(version.status.code(), Some(0));
}

#[test]
fn validation_failures_exit_one() {
    let dir = TempDir::new().unwrap();
    // Missing input file.
    let missing = run_in(dir.path(), &["enumerate", "--network", "absent.json", "--out", "x.csv"]);
    assert_eq!(missing.status.code(), Some(1));

    // Symmetry violation, named with both offending values.
    write_file(
        dir.path(),
        "bad.json",
        r#"{"n":2,"weights":[[0,1,1.0],[1,0,0.5]],"biases":[0,0],"clamps":[],"symmetric":true}"#,
    );
    let asymmetric = run_in(dir.path(), &["enumerate", "--network", "bad.json", "--out", "x.csv"]);
    assert_eq!(asymmetric.status.code(), Some(1));
    let message = stderr_of(&asymmetric);
    assert!(message.contains('1') && message.contains("0.5"), "stderr: {message}");

    // A flag outside its schedule's domain.
    write_file(dir.path(), "net.json", FERROMAGNET);
    let delay = run_in(
        dir.path(),
        &["sample", "--network", "net.json", "--delay", "0.5", "--out", "x.csv"],
    );
    assert_eq!(delay.status.code(), Some(1));
}

#[test]
fn exhausted_synthesis_budget_exits_two_and_writes_nothing() {
    let dir = TempDir::new().unwrap();
    write_file(dir.path(), "gate.csv", AND_OR_XNOR_TABLE);
    let out = run_in(
        dir.path(),
        &["synth-gate", "--table", "gate.csv", "--max-iters", "1", "--out", "gate.json"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("1 iterations"));
    // The atomic-write path never creates the artifact on failure, and no
    // temp file is left behind.
    let leftovers: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|name| name != "gate.csv")
        .collect();
    assert!(leftovers.is_empty(), "stray files: {leftovers:?}");
}
