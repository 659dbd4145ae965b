//! Black-box tests of the `cahnet` binary: exit codes, error messages,
//! CSV structure, and output determinism on the cheap paths.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bundled_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.toml")
}

fn run(args: &[&str]) -> Output {
    let config = bundled_config();
    let mut full = vec!["--config", config.to_str().unwrap()];
    full.extend_from_slice(args);
    Command::new(env!("CARGO_BIN_EXE_cahnet"))
        .args(full)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 output")
}

#[test]
fn help_succeeds_and_lists_commands() {
    let output = run(&["--help"]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    for command in [
        "control",
        "mc",
        "reproduce-table1",
        "reproduce-fig2",
        "queue-check",
    ] {
        assert!(text.contains(command), "help is missing `{command}`");
    }
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let output = run(&["control", "--frobnicate"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn missing_config_file_exits_one() {
    let output = Command::new(env!("CARGO_BIN_EXE_cahnet"))
        .args(["--config", "/no/such/file.toml", "control"])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("/no/such/file.toml"));
}

#[test]
fn invalid_scenario_names_offending_field() {
    let dir = std::env::temp_dir();
    let path = dir.join("cahnet-cli-test-bad-config.toml");
    // l = 3 needs n_t ≥ 5; the bundled n_t = 4 makes this invalid.
    let mut text = std::fs::read_to_string(bundled_config()).unwrap();
    text.push_str("\nl = 3\nsigma_intra = 0.0001\n");
    std::fs::write(&path, text).unwrap();
    let output = Command::new(env!("CARGO_BIN_EXE_cahnet"))
        .args(["--config", path.to_str().unwrap(), "control"])
        .output()
        .expect("binary runs");
    let _ = std::fs::remove_file(&path);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("l"), "error should name the field");
}

#[test]
fn zero_budget_control_exits_two() {
    let output = run(&["control", "--aic", "0"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn control_reports_the_reference_plan() {
    let output = run(&["control"]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("total_bits 16"));
    assert!(text.contains("shortcut none"));
}

#[test]
fn exhaustive_method_is_selectable() {
    let output = run(&["control", "--method", "ea", "--aic", "0.03"]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).contains("total_bits 4"));
}

#[test]
fn table_csv_has_metadata_and_all_rows() {
    let dir = std::env::temp_dir();
    let path = dir.join("cahnet-cli-test-table1.csv");
    let output = run(&["reproduce-table1", "--out", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    let _ = std::fs::remove_file(&path);
    for needle in [
        "# cahnet ",
        "# command: reproduce-table1",
        "# config_sha256: ",
    ] {
        assert!(csv.contains(needle), "missing metadata `{needle}`");
    }
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(
        lines.next().unwrap(),
        "aic,method,b1,b2,b3,total_bits,bound,cost,shortcut"
    );
    // 4 grid points × 2 methods + the appended loose-budget row.
    assert_eq!(lines.count(), 9);
    assert!(csv.contains("loose_aic"));
}

#[test]
fn infeasible_grid_point_is_marked_and_exits_two() {
    let output = run(&["reproduce-table1", "--aic-list", "0,0.04"]);
    assert_eq!(output.status.code(), Some(2));
    let text = stdout(&output);
    assert!(text.contains("zero_aic_infeasible"));
    assert!(text.contains("0.04")); // the feasible row still rendered
}

#[test]
fn table_runs_are_byte_identical() {
    let dir = std::env::temp_dir();
    let first = dir.join("cahnet-cli-test-det-a.csv");
    let second = dir.join("cahnet-cli-test-det-b.csv");
    for path in [&first, &second] {
        let output = run(&["reproduce-table1", "--out", path.to_str().unwrap()]);
        assert_eq!(output.status.code(), Some(0));
    }
    let a = std::fs::read(&first).unwrap();
    let b = std::fs::read(&second).unwrap();
    let _ = std::fs::remove_file(&first);
    let _ = std::fs::remove_file(&second);
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn fig2_stdout_is_csv_when_no_out_path() {
    let output = run(&[
        "reproduce-fig2",
        "--aic-list",
        "0.04",
        "--trials",
        "200",
        "--seed",
        "7",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# cahnet "));
    assert!(text.contains("# seed: 7"));
    assert!(text.contains("# trials: 200"));
    let header = text
        .lines()
        .find(|l| !l.starts_with('#'))
        .expect("has a header row");
    assert_eq!(
        header,
        "aic,method,empirical_mean_interference,ci_halfwidth,analytical_bound"
    );
    // One GA and one EA row for the single grid point.
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 3);
}

#[test]
fn queue_check_stress_flags_work() {
    // A slack delay budget passes comfortably even at reduced power.
    let output = run(&[
        "queue-check",
        "--intervals",
        "20000",
        "--delay-scale",
        "100",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert_eq!(text.matches("pass").count(), 3, "all three links pass");
}

#[test]
fn queue_check_rejects_bad_scale() {
    let output = run(&["queue-check", "--power-scale=-1", "--intervals", "100"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("power-scale"));
}
