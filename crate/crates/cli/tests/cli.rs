use std::path::{Path, PathBuf};
use std::process::Command;

use rpm_cli::report::Report;
use serde_json::json;
use tempfile::TempDir;

fn rpmgeom(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rpmgeom"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exited normally"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json_report(args: &[&str]) -> (i32, Report) {
    let mut all = args.to_vec();
    all.push("--json");
    let (code, stdout, stderr) = rpmgeom(&all);
    let report = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout}{stderr}"));
    (code, report)
}

fn write(dir: &TempDir, name: &str, value: &serde_json::Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const SWAP: [[i32; 4]; 4] = [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]];
const ID: [[i32; 4]; 4] = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];

/// The example family written out bracket by bracket.
fn explicit_example(l: [i64; 4]) -> serde_json::Value {
    let a = l;
    let b = [l[3], -l[2], l[1], -l[0]];
    json!({
        "dim": 4,
        "brackets": [
            {"i": 1, "j": 2, "coeffs": a},
            {"i": 3, "j": 4, "coeffs": a.map(|v| -v)},
            {"i": 1, "j": 3, "coeffs": b},
            {"i": 2, "j": 4, "coeffs": b},
        ],
        "metric": ID,
        "P": SWAP,
    })
}

#[test]
fn verify_paper_passes_on_the_reference_lambda() {
    let (code, report) = json_report(&["verify-paper", "--lambda", "1,2,3,4"]);
    assert_eq!(code, 0);
    assert!(report.checks.iter().all(|c| c.pass));
    assert_eq!(report.tables["tau"], json!(-180.0));
    assert_eq!(report.tables["theta"], json!([16.0, -12.0, -8.0, 4.0]));
}

#[test]
fn zero_lambda_is_degenerate_but_passes() {
    let (code, stdout, _) = rpmgeom(&["verify-paper", "--lambda", "0,0,0,0"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("degenerate case"));
}

#[test]
fn equal_lambdas_report_constant_sectional_flag() {
    let (code, report) = json_report(&["verify-paper", "--lambda", "1,1,1,1"]);
    assert_eq!(code, 0);
    assert!(report.flags["const_sectional"]);
    assert_eq!(report.tables["tau"], json!(-24.0));
}

#[test]
fn unequal_lambdas_are_not_const_sectional() {
    let (_, report) = json_report(&["verify-paper", "--lambda", "1,-1/2,3,0"]);
    assert!(!report.flags["const_sectional"]);
}

#[test]
fn malformed_arguments_exit_2() {
    for args in [
        vec!["verify-paper", "--lambda", "1,2,3"],
        vec!["verify-paper", "--lambda", "1,x,3,4"],
        vec!["verify-paper"],
        vec!["analyze", "--file", "/definitely/not/here.json"],
        vec!["nonsense"],
        vec!["conformal", "--lambda", "1,0,0,0", "--alpha", "0,1,0"],
        vec!["verify-paper", "--lambda", "1,2,3,4", "--epsilon", "-1"],
    ] {
        assert_eq!(rpmgeom(&args).0, 2, "{args:?}");
    }
}

#[test]
fn malformed_files_exit_2() {
    let dir = TempDir::new().unwrap();
    let cases = [
        json!({"builtin": {"name": "w1-example", "lambda": [1, 0, 0, 0]}, "dim": 4}),
        json!({"builtin": {"name": "other", "lambda": [1, 0, 0, 0]}}),
        json!({"dim": 3, "brackets": [], "metric": ID, "P": SWAP}),
        json!({"dim": 4, "brackets": [{"i": 0, "j": 1, "coeffs": [0, 0, 0, 0]}], "metric": ID, "P": SWAP}),
        json!({"dim": 4, "brackets": [], "metric": ID, "P": SWAP, "extra": 1}),
        json!({"dim": 4, "brackets": [], "metric": [["1/0", 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], "P": SWAP}),
    ];
    for (n, case) in cases.iter().enumerate() {
        let path = write(&dir, &format!("bad{n}.json"), case);
        assert_eq!(rpmgeom(&["analyze", "--file", s(&path)]).0, 2, "{case}");
    }
    let path = dir.path().join("garbage.json");
    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(rpmgeom(&["analyze", "--file", s(&path)]).0, 2);
}

#[test]
fn builtin_file_reports_scalar_curvature_minus_six() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "b.json",
        &json!({"builtin": {"name": "w1-example", "lambda": ["1", 0, 0, 0]}}),
    );
    let (code, report) = json_report(&["analyze", "--file", s(&path)]);
    assert_eq!(code, 0);
    assert_eq!(report.tables["tau"], json!(-6.0));
    assert!(report.flags["w1"]);
    assert!(report.flags["d_flat"]);
}

#[test]
fn abelian_block_reflection_is_flat_w0() {
    let dir = TempDir::new().unwrap();
    let p = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]];
    let path = write(&dir, "a.json", &json!({"dim": 4, "brackets": [], "metric": ID, "P": p}));
    let (code, report) = json_report(&["analyze", "--file", s(&path)]);
    assert_eq!(code, 0);
    assert!(report.flags["w0"]);
    for t in ["R", "Rprime", "rho", "weyl", "gamma", "D"] {
        let flat: Vec<f64> = flatten(&report.tables[t]);
        assert!(flat.iter().all(|v| *v == 0.0), "{t}");
    }
    assert_eq!(report.tables["tau"], json!(0.0));
}

fn flatten(v: &serde_json::Value) -> Vec<f64> {
    match v {
        serde_json::Value::Array(items) => items.iter().flat_map(flatten).collect(),
        other => vec![other.as_f64().unwrap()],
    }
}

#[test]
fn explicit_file_matches_builtin() {
    let dir = TempDir::new().unwrap();
    let builtin = write(
        &dir,
        "b.json",
        &json!({"builtin": {"name": "w1-example", "lambda": [1, 2, 3, 4]}}),
    );
    let explicit = write(&dir, "e.json", &explicit_example([1, 2, 3, 4]));
    let (c1, r1) = json_report(&["analyze", "--file", s(&builtin)]);
    let (c2, r2) = json_report(&["analyze", "--file", s(&explicit)]);
    assert_eq!(c1, c2);
    assert_eq!(r1.checks, r2.checks);
    assert_eq!(r1.tables, r2.tables);
    assert_eq!(r1.flags, r2.flags);
    assert_ne!(r1.instance, r2.instance);
}

#[test]
fn structural_failure_exits_3_with_report() {
    let dir = TempDir::new().unwrap();
    // P = identity has trace 4
    let path = write(
        &dir,
        "p.json",
        &json!({"dim": 4, "brackets": [], "metric": ID, "P": ID}),
    );
    let (code, report) = json_report(&["analyze", "--file", s(&path)]);
    assert_eq!(code, 3);
    let tr = report.checks.iter().find(|c| c.name == "p_trace_zero").unwrap();
    assert_eq!(tr.defect, 4.0);
    assert!(!tr.pass);

    let indefinite = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]];
    let path = write(
        &dir,
        "g.json",
        &json!({"dim": 4, "brackets": [], "metric": indefinite, "P": SWAP}),
    );
    assert_eq!(rpmgeom(&["analyze", "--file", s(&path)]).0, 3);
}

#[test]
fn non_lie_brackets_fail_structure() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "j.json",
        &json!({"dim": 4, "brackets": [
            {"i": 1, "j": 2, "coeffs": [0, 0, 1, 0]},
            {"i": 3, "j": 4, "coeffs": [1, 0, 0, 0]},
        ], "metric": ID, "P": SWAP}),
    );
    let (code, report) = json_report(&["analyze", "--file", s(&path)]);
    assert_eq!(code, 3);
    assert!(!report.checks.iter().find(|c| c.name == "jacobi_identity").unwrap().pass);
}

#[test]
fn conformal_closed_alpha_passes() {
    let (code, report) = json_report(&["conformal", "--lambda", "1,0,0,0", "--alpha", "0,1,0,0"]);
    assert_eq!(code, 0);
    let thm = report
        .checks
        .iter()
        .find(|c| c.name == "conformal_d_curvature")
        .unwrap();
    assert!(thm.defect <= 1e-9);
    assert!(report.flags["deformed_w1"]);
}

#[test]
fn conformal_zero_alpha_has_zero_residuals() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "b.json",
        &json!({"builtin": {"name": "w1-example", "lambda": [1, 2, 3, 4]}}),
    );
    let (code, report) = json_report(&["conformal", "--file", s(&path), "--alpha", "0,0,0,0"]);
    assert_eq!(code, 0);
    for c in report.checks.iter().filter(|c| c.name.starts_with("conformal_")) {
        assert!(c.defect <= 1e-12, "{}: {}", c.name, c.defect);
    }
}

#[test]
fn conformal_non_closed_alpha_exits_4() {
    let (code, _, stderr) = rpmgeom(&["conformal", "--lambda", "1,0,0,0", "--alpha", "1,0,0,0"]);
    assert_eq!(code, 4);
    assert!(stderr.contains("derived subalgebra"));
}

#[test]
fn json_verdicts_reproduce_exit_status() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        &dir,
        "p.json",
        &json!({"dim": 4, "brackets": [], "metric": ID, "P": ID}),
    );
    let runs: Vec<Vec<&str>> = vec![
        vec!["verify-paper", "--lambda", "1,2,3,4"],
        vec!["verify-paper", "--lambda", "2,-1,0,1/3"],
        vec!["verify-paper", "--lambda", "1,2,3,4", "--epsilon", "1e-30"],
        vec!["analyze", "--file", s(&bad)],
        vec!["conformal", "--lambda", "1,2,3,4", "--alpha", "0,0,0,0"],
    ];
    for args in runs {
        let (code, report) = json_report(&args);
        assert_eq!(report.reevaluated_exit_code(), code, "{args:?}");
        assert_eq!(report.exit_code(), code);
        let text = serde_json::to_string(&report).unwrap();
        let again: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(again, report);
    }
}

#[test]
fn seed_changes_sampled_alpha_only() {
    let (_, a) = json_report(&["verify-paper", "--lambda", "1,2,3,4", "--seed", "1"]);
    let (_, b) = json_report(&["verify-paper", "--lambda", "1,2,3,4", "--seed", "2"]);
    let (_, c) = json_report(&["verify-paper", "--lambda", "1,2,3,4", "--seed", "1"]);
    assert_ne!(a.tables["conformal_alpha"], b.tables["conformal_alpha"]);
    assert_eq!(a, c);
    assert_eq!(a.tables["rho"], b.tables["rho"]);
}

#[test]
fn text_output_lists_checks() {
    let (code, stdout, _) = rpmgeom(&["verify-paper", "--lambda", "1,2,3,4"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("PASS curvature_relation"));
    assert!(stdout.contains("checks passed"));
}
