//! End-to-end runs of the `wtrace` binary.

use std::io::Write;
use std::process::{Command, Output};

use wtrace::report::{CheckReport, CSV_HEADER};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wtrace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn reports(out: &Output) -> Vec<CheckReport> {
    serde_json::from_slice(&out.stdout).expect("json array of reports")
}

#[test]
fn lambda_suite_passes_as_json() {
    let out = run(&["--suite", "lambda", "--jobs", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let reps = reports(&out);
    assert!(!reps.is_empty());
    assert!(reps.iter().all(CheckReport::passed));
}

#[test]
fn csv_output_has_fixed_header() {
    let out = run(&["--suite", "traces", "--format", "csv", "--stable"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",pass,0")));
}

#[test]
fn failing_checks_set_exit_code_one() {
    let out = run(&["--suite", "chern", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(reports(&out).iter().any(|r| !r.passed()));
}

#[test]
fn negative_tolerance_is_an_error() {
    assert_eq!(
        run(&["--suite", "lambda", "--tol=-1"]).status.code(),
        Some(2)
    );
}

#[test]
fn unknown_suite_is_an_error() {
    let out = run(&["--suite", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope"));
}

#[test]
fn empty_algebra_is_a_config_error() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, r#"{{"dim": 0, "entries": []}}"#).unwrap();
    let out = run(&["--algebra", f.path().to_str().unwrap(), "--suite", "traces"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn custom_algebra_file_is_used() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    let entries: Vec<String> = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
        .iter()
        .flat_map(|(i, j, k)| [format!("[{i},{j},{k},1.0]"), format!("[{j},{i},{k},-1.0]")])
        .collect();
    write!(f, r#"{{"dim": 3, "entries": [{}]}}"#, entries.join(",")).unwrap();
    let out = run(&["--algebra", f.path().to_str().unwrap(), "--suite", "lambda"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn stable_output_is_reproducible() {
    let a = run(&["--suite", "radul", "--stable", "--jobs", "1"]);
    let b = run(&["--suite", "radul", "--stable", "--jobs", "4"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn compute_first_chern_and_residue() {
    let out = run(&[
        "compute",
        "first_chern",
        "(z^1 e1, z^-1 e1)",
        "--expect",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = &reports(&out)[0];
    assert!((r.lhs.re - 2.0).abs() < 1e-9);

    let out = run(&[
        "compute", "res", "|D+P|^-1", "--expect", "6", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["compute", "lambda", "(z^2 e1, z^-2 e1)", "--expect", "4"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn compute_reports_wrong_expectation() {
    let out = run(&["compute", "symplectic", "(z e1, z^-1 e2)", "--expect", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn compute_rejects_bad_input() {
    assert_eq!(run(&["compute", "nope", "D"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "res", "D^"]).status.code(), Some(2));
}
