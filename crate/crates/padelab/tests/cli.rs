//! End-to-end tests of the `padelab` binary: the exit-code contract,
//! deterministic artifacts, the coefficient file format, and the catalog.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_padelab"))
}

fn run_args(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const PADE_ROW: &str = r#"{
    "task": "pade_row",
    "series": [{"rational": {"terms": [
        {"c": "1", "a": "1"},
        {"c": "1", "a": "2"}
    ], "label": "two poles"}}],
    "n": {"from": 4, "to": 12},
    "m": 2
}"#;

#[test]
fn successful_run_writes_artifacts_and_revalidates() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "exp.json", PADE_ROW);
    let out_dir = dir.path().join("artifacts");
    let out = run_args(&["run", &config, "--out", out_dir.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("re-validated on reload"), "stdout: {stdout}");
    assert!(stdout.contains("wrote "), "stdout: {stdout}");

    let row = fs::read_to_string(out_dir.join("row.csv")).unwrap();
    assert!(row.starts_with("n,m,m_star,lambda,unique,q,roots,residual,residual_ok,a_n,qstar_roots"));
    assert_eq!(row.lines().count(), 1 + 9, "header plus one line per n");

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["experiment"]["task"], "pade_row");
    assert_eq!(report["rows"]["count"], 9);
    assert_eq!(report["rows"]["all_residuals_ok"], true);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "exp.json", PADE_ROW);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out_dir in [&a, &b] {
        let out = run_args(&["run", &config, "--out", out_dir.to_str().unwrap()]);
        assert!(out.status.success());
    }
    assert_eq!(
        fs::read(a.join("row.csv")).unwrap(),
        fs::read(b.join("row.csv")).unwrap()
    );
    assert_eq!(
        fs::read(a.join("report.json")).unwrap(),
        fs::read(b.join("report.json")).unwrap()
    );
}

#[test]
fn coefficient_file_series_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    // Taylor coefficients of 1/(1-z): 1, 1, 1, ... in `n re im` lines,
    // with comments and blank lines allowed.
    let mut lines = String::from("# geometric series\n\n");
    for n in 0..=16 {
        lines.push_str(&format!("{n} 1 0\n"));
    }
    fs::write(dir.path().join("geo.coeff"), lines).unwrap();
    // The path is relative to the config file's directory.
    let config = write_config(
        dir.path(),
        "exp.json",
        r#"{
            "task": "pade_row",
            "series": [{"file": {"path": "geo.coeff"}}],
            "n": {"from": 2, "to": 8},
            "m": 1
        }"#,
    );
    let out_dir = dir.path().join("out");
    let out = run_args(&["run", &config, "--out", out_dir.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    // The single pole at 1 is recovered from the file-backed series.
    assert_eq!(report["rows"]["all_residuals_ok"], true);
}

#[test]
fn precision_and_backend_overrides_are_applied() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "exp.json", PADE_ROW);
    let out_dir = dir.path().join("out");
    let out = run_args(&[
        "run",
        &config,
        "--backend",
        "float",
        "--precision",
        "45",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["experiment"]["backend"], "float");
    assert_eq!(report["experiment"]["digits"], 45);
}

#[test]
fn malformed_json_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "bad.json", "{ not json");
    let out = run_args(&["run", &config]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("padelab:"));
}

#[test]
fn unknown_config_field_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "bad.json",
        r#"{
            "task": "pade_row",
            "series": [{"rational": {"terms": [{"c": "1", "a": "1"}]}}],
            "n": {"from": 4, "to": 8},
            "m": 1,
            "mystery_knob": true
        }"#,
    );
    let out = run_args(&["run", &config]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_coefficient_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "exp.json",
        r#"{
            "task": "diagnose",
            "series": [{"file": {"path": "no_such_file.coeff"}}],
            "n": {"from": 4, "to": 8},
            "m": 1
        }"#,
    );
    let out = run_args(&["run", &config]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_config_path_exits_2() {
    let out = run_args(&["run", "/nonexistent/config.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_backend_override_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "exp.json", PADE_ROW);
    let out = run_args(&["run", &config, "--backend", "quantum"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_m_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "exp.json",
        r#"{
            "task": "pade_row",
            "series": [{"rational": {"terms": [{"c": "1", "a": "1"}]}}],
            "n": {"from": 4, "to": 8}
        }"#,
    );
    let out = run_args(&["run", &config]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("m"));
}

#[test]
fn empty_row_range_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "exp.json",
        r#"{
            "task": "pade_row",
            "series": [{"rational": {"terms": [{"c": "1", "a": "1"}]}}],
            "n": {"from": 10, "to": 4},
            "m": 1
        }"#,
    );
    let out = run_args(&["run", &config]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn multi_index_arity_mismatch_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "exp.json",
        r#"{
            "task": "hermite_pade_row",
            "series": [
                {"rational": {"terms": [{"c": "1", "a": "1"}]}},
                {"rational": {"terms": [{"c": "1", "a": "2"}]}}
            ],
            "n": {"from": 4, "to": 10},
            "multi_index": [1, 1, 1]
        }"#,
    );
    let out = run_args(&["run", &config]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unwritable_output_directory_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "exp.json", PADE_ROW);
    // A path that nests a directory under an existing *file* cannot be
    // created; this is an output failure, not a config or math failure.
    let blocker = dir.path().join("blocker");
    fs::write(&blocker, "plain file").unwrap();
    let out_dir = blocker.join("out");
    let out = run_args(&["run", &config, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn catalog_lists_all_series_families() {
    let out = run_args(&["catalog"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for family in ["rational", "log_branch", "binomial", "entire_exp", "combine", "file"] {
        assert!(text.contains(family), "catalog missing {family}: {text}");
    }
    // The catalog is part of the deterministic surface: same bytes each call.
    let again = run_args(&["catalog"]);
    assert_eq!(out.stdout, again.stdout);
}
