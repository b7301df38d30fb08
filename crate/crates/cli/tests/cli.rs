use std::process::{Command, Output};

use serde_json::Value;

fn qhred(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhred")).args(args).output().expect("spawn qhred")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn compute_value(args: &[&str]) -> f64 {
    let o = qhred(args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    v["value"].as_f64().unwrap()
}

const I2: &str = "[[1,0],[0,1]]";

#[test]
fn torsor_suite_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = qhred(&["verify", "--suite", "torsor", "--backend", "sl2", "--trials", "50", "--seed", "3", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["summary"]["failed"], 0);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["suite"] == "torsor"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "--backend", "e8"][..],
        &["verify", "--suite", "nope"],
        &["verify", "--tol", "0"],
        &["verify", "--tol", "0.1"],
        &["verify", "--trials", "0"],
        &["verify", "--bogus"],
        &["verify", "--backend", "gl3", "--n", "2"],
    ] {
        let o = qhred(args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let o = qhred(&["verify", "--suite", "cech", "--backend", "gl", "--n", "2", "--trials", "20", "--seed", "11", "--output", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
        std::fs::read(p).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn gl1_full_run_passes_torus_example() {
    let o = qhred(&["verify", "--backend", "gl1", "--trials", "20"]);
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    let torus = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["anchor"] == "gl1torus")
        .expect("gl1 torus check present");
    assert_eq!(torus["status"], "pass");
}

#[test]
fn canonical_values_at_identity() {
    let e = format!("[{I2}]");
    let omega1 = compute_value(&[
        "compute", "omega1", "--backend", "sl2", "--point", &e,
        "--tangents", "[[[[0,1],[0,0]]],[[[0,0],[1,0]]],[[[1,0],[0,-1]]]]",
    ]);
    assert!((omega1 - 1.0).abs() < 1e-12);
    let ee = format!("[{I2},{I2}]");
    let phi = compute_value(&[
        "compute", "phi", "--backend", "sl2", "--point", &ee,
        "--tangents", "[[[[0,1],[0,0]],[[0,0],[0,0]]],[[[0,0],[0,0]],[[0,0],[1,0]]]]",
    ]);
    assert!((phi + 0.5).abs() < 1e-12);
}

#[test]
fn omega0_reads_slot() {
    let v = compute_value(&[
        "compute", "omega0", "--backend", "sl2", "--point", &format!("[{I2}]"),
        "--tangents", "[[[[0,1],[0,0]]]]", "--slot", "[[0,0],[1,0]]",
    ]);
    // -(1/2)(theta + thetabar, x) with theta = thetabar = e at the identity
    assert!((v + 1.0).abs() < 1e-12);
}

#[test]
fn torus_h0_vanishes_on_parallel_tangents() {
    let v = compute_value(&["compute", "h0_torus", "--backend", "gl1", "--point", "[[[2]],[[3]]]", "--tangents", "[[[[1]],[[0]]],[[[1]],[[0]]]]"]);
    assert_eq!(v, 0.0);
}

#[test]
fn genus_form_accepts_parenthesized_name() {
    let o = qhred(&["compute", "h0_genus(2)", "--backend", "gl1", "--point", "[[[1]],[[1]],[[1]],[[1]]]", "--tangents", "[[[[1]],[[0]],[[0]],[[0]]],[[[0]],[[1]],[[0]],[[0]]]]"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn shape_mismatch_names_expected_shape() {
    let o = qhred(&["compute", "omega1", "--backend", "sl2", "--point", &format!("[{I2}]"), "--tangents", "[]"]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("3-form") && err.contains("expected 3 tangents"), "{err}");
    let o = qhred(&["compute", "phi", "--backend", "sl2", "--point", &format!("[{I2}]"), "--tangents", "[]"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("expected 2 point factors"));
}
