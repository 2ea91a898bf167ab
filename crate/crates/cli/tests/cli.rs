//! End-to-end tests of the binary: exit codes, output formats and
//! reproducibility.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn steerbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steerbound"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn validate_accepts_mub_spec() {
    let out = steerbound(&["validate", fixture("mub_pair_d7.json").to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("valid"));
    assert!(text.contains("MUB check passed"));
}

#[test]
fn validate_rejects_negative_coefficient_with_exit_2() {
    let out = steerbound(&[
        "validate",
        fixture("bad_negative_coeff.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("nonnegative"), "{err}");
}

#[test]
fn validate_rejects_non_unit_target_with_offending_index() {
    let out = steerbound(&["validate", fixture("bad_target_norm.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("(b=0, y=0)"), "{err}");
}

#[test]
fn beta0_two_mub_d3() {
    let out = steerbound(&["beta0", fixture("mub_pair_d3.json").to_str().unwrap()]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let value = parsed["value"].as_f64().unwrap();
    assert!((value - (1.0 + 1.0 / 3f64.sqrt())).abs() < 1e-9);
    assert_eq!(parsed["method"], "exact-enumeration");
}

#[test]
fn bound_mub_d2_half_percent() {
    let out = steerbound(&["bound", fixture("mub_pair_d2.json").to_str().unwrap()]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let value = parsed["value"].as_f64().unwrap();
    assert!((value - 1.7998).abs() < 5e-4, "bound value {value}");
    assert_eq!(parsed["method"], "result1-minimized");
}

#[test]
fn lhs_at_zero_imprecision_matches_beta0() {
    // Rewrite the d=3 fixture with eps = 0 through a temp file.
    let spec = std::fs::read_to_string(fixture("mub_pair_d3.json")).unwrap();
    let mut parsed: serde_json::Value = serde_json::from_str(&spec).unwrap();
    parsed["epsilons"] = serde_json::json!({ "uniform": 0.0 });
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("eps0.json");
    std::fs::write(&path, serde_json::to_string(&parsed).unwrap()).unwrap();

    let lhs = steerbound(&["lhs", path.to_str().unwrap(), "--restarts", "2"]);
    assert!(lhs.status.success());
    let lhs_value = serde_json::from_str::<serde_json::Value>(&stdout(&lhs)).unwrap()["value"]
        .as_f64()
        .unwrap();
    let beta0 = steerbound(&["beta0", path.to_str().unwrap()]);
    let beta0_value = serde_json::from_str::<serde_json::Value>(&stdout(&beta0)).unwrap()["value"]
        .as_f64()
        .unwrap();
    assert!((lhs_value - beta0_value).abs() < 1e-9);
}

#[test]
fn lhs_csv_output_and_reproducibility() {
    let path = fixture("elegant_bell.json");
    let args = [
        "lhs",
        path.to_str().unwrap(),
        "--output",
        "csv",
        "--seed",
        "11",
        "--restarts",
        "4",
    ];
    let a = steerbound(&args);
    let b = steerbound(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b), "same seed must give identical output");
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "value,assignment,heuristic");
    let row = lines.next().unwrap();
    // Plateau regime: probability-form value 8 (correlator value 4).
    let value: f64 = row.split(',').next().unwrap().parse().unwrap();
    assert!((value - 8.0).abs() < 1e-6, "row {row}");
}

#[test]
fn bound_exceeding_cap_exits_3_and_heuristic_recovers() {
    let strict = steerbound(&[
        "lhs",
        fixture("too_many_inputs.json").to_str().unwrap(),
        "--cap",
        "1000",
    ]);
    assert_eq!(strict.status.code(), Some(3));

    let relaxed = steerbound(&[
        "lhs",
        fixture("too_many_inputs.json").to_str().unwrap(),
        "--cap",
        "1000",
        "--heuristic",
        "--restarts",
        "6",
    ]);
    assert!(relaxed.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&relaxed)).unwrap();
    assert_eq!(parsed["heuristic_assignment"], true);
    assert!(parsed["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn grid_emits_deterministic_csv() {
    let args = [
        "grid",
        fixture("grid_d3_small.json").to_str().unwrap(),
        "--restarts",
        "2",
        "--seed",
        "3",
    ];
    let a = steerbound(&args);
    assert!(a.status.success());
    let text = stdout(&a);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines[0], "eps1,eps2,upper,lower,gap");
    assert_eq!(lines.len(), 1 + 3 * 2);
    // Row order is axis1-major and uses dot decimals.
    assert!(lines[1].starts_with("0,0,"));
    assert!(lines[2].starts_with("0,0.02,"));
    assert!(lines[3].starts_with("0.01,0,"));
    for line in &lines[1..] {
        let fields: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let (upper, lower, gap) = (fields[2], fields[3], fields[4]);
        assert!(gap >= -1e-7);
        assert!((gap - (upper - lower)).abs() < 1e-12);
    }
    let b = steerbound(&args);
    assert_eq!(text, stdout(&b));
}

#[test]
fn case_qubit_steer_vs_bell_passes() {
    let out = steerbound(&["case", "qubit-steer-vs-bell", "--restarts", "6"]);
    let text = stdout(&out);
    assert!(out.status.success(), "{text}");
    assert!(text.contains("plateau"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn lemma_check_passes() {
    let out = steerbound(&["lemma-check", "--tuples", "200", "--seed", "5"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("lemma check passed"));
}
