//! End-to-end runs of the `voterlab` binary.

use std::path::Path;
use std::process::{Command, Output};

fn voterlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_voterlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn simulate(out: &Path, threads: &str) -> Output {
    voterlab(&[
        "simulate",
        "--models",
        "voter,cow,mid:0.5:0.5",
        "--L",
        "6,12",
        "--m",
        "3",
        "--seed",
        "9",
        "--threads",
        threads,
        "--out",
        out.to_str().unwrap(),
    ])
}

#[test]
fn simulate_is_reproducible_and_counts_rows() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert!(simulate(&a, "1").status.success());
    assert!(simulate(&b, "2").status.success());
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().count(), 1 + 3 * 2 * 3);
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    let out = dir.path().join("runs.csv");
    std::fs::write(
        &cfg,
        format!(
            "models = [\"voter\"]\nL = [5]\nm = 4\nout = {:?}\n",
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let o = voterlab(&["simulate", "--config", cfg.to_str().unwrap(), "--m", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 3);
}

#[test]
fn estimate_reports_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let runs = dir.path().join("runs.csv");
    assert!(simulate(&runs, "1").status.success());
    let report = dir.path().join("report");
    let o = voterlab(&[
        "estimate",
        runs.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("interface_length (d)") && text.contains("mid (p = 0.5, q = 0.5)"));
    assert!(report.join("estimates.csv").exists() && report.join("estimates.txt").exists());
}

#[test]
fn bad_schema_names_the_column() {
    let dir = tempfile::tempdir().unwrap();
    let runs = dir.path().join("bad.csv");
    std::fs::write(&runs, "run_id,model,p\n").unwrap();
    let o = voterlab(&["estimate", runs.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("model_name"));
}

#[test]
fn oracle_outputs_and_caps() {
    let o = voterlab(&["oracle", "harmonic", "--L", "3"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "i,j,h\n1,1,0.5\n");
    let o = voterlab(&["oracle", "stationary", "--L", "6"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap 12"));
}

#[test]
fn config_errors_exit_with_two() {
    assert_eq!(voterlab(&["simulate", "--L", "2"]).status.code(), Some(2));
    assert_eq!(
        voterlab(&["simulate", "--L", "8", "--models", "ising"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        voterlab(&["simulate", "--L", "8", "--convention", "other"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn render_from_run_table() {
    let dir = tempfile::tempdir().unwrap();
    let runs = dir.path().join("runs.csv");
    assert!(simulate(&runs, "1").status.success());
    let svg = dir.path().join("x.svg");
    let o = voterlab(&[
        "render",
        "--csv",
        runs.to_str().unwrap(),
        "--run-id",
        "4",
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains("<polyline"));
}
