use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qpg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpg"))
        .args(args)
        .env("QPG_THREADS", "2")
        .output()
        .expect("spawn qpg")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn stderr_record(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(text.lines().next().expect("stderr line")).expect("stderr is JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn weyl_run_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = qpg(&["--report", path(p), "weyl", "run", "--group", "2", "--samples", "500", "--seed", "11"]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let r: Value = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
    assert!(r.get("timings").is_none());
    assert_eq!(r["data"]["moments"][0]["p"], 1);
}

#[test]
fn timings_are_opt_in() {
    let out = qpg(&["--timings", "group", "analyze", "--family", "cyclic:3"]);
    assert!(report(&out)["timings"]["total_seconds"].is_number());
}

#[test]
fn pgl2_5_analysis() {
    let out = qpg(&["group", "analyze", "--family", "pgl2:5", "--deranging-order", "6", "--expect-order", "120"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["data"]["order"], 120);
    assert_eq!(r["data"]["certificate_found"], true);
    let found = &r["data"]["deranging_subgroups"][0];
    assert_eq!(found["order"], 6);
    assert_eq!(found["count"], 20);
    assert_eq!(found["cyclic"], 10);
}

#[test]
fn failed_check_exits_2() {
    let out = qpg(&["group", "analyze", "--family", "pgl2:5", "--expect-no-deranging", "6"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_record(&out)["error"], "check-failed");
    assert_eq!(report(&out)["checks"][0]["verdict"], "fail");
}

#[test]
fn bad_input_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = qpg(&["model", "check", "--input", path(&bad)]);
    assert_eq!(out.status.code(), Some(3));
    let rec = stderr_record(&out);
    assert_eq!(rec["error"], "parse");
    assert_eq!(rec["exit_code"], 3);

    let out = qpg(&["model", "check", "--input", path(&dir.path().join("missing.json"))]);
    assert_eq!(out.status.code(), Some(3));

    let out = qpg(&["hadamard", "build", "--name", "fourier:0", "--output", path(&bad)]);
    assert_eq!(out.status.code(), Some(3));

    let out = qpg(&["group", "analyze", "--bogus"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_record(&out)["error"], "usage");
}

#[test]
fn non_hadamard_matrix_is_a_failed_check() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("h.json");
    std::fs::write(&f, r#"{"kind": "hadamard", "rows": 2, "cols": 2, "entries": [[1,0],[1,0],[1,0],[1,0]]}"#).unwrap();
    let out = qpg(&["hadamard", "validate", "--input", path(&f)]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn caps_exit_4() {
    let out = qpg(&["weyl", "run", "--group", "64", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(stderr_record(&out)["error"], "resource-cap");

    let out = qpg(&["group", "analyze", "--family", "symmetric:12"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn fourier_model_roundtrip_is_stationary() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("f4.json");
    let csv = dir.path().join("defects.csv");
    let out = qpg(&["model", "build", "--spec", "fourier:4", "--output", path(&model)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["data"]["size"], 4);

    let out = qpg(&[
        "--csv",
        path(&csv),
        "model",
        "check",
        "--input",
        path(&model),
        "--stationary",
        "--p-max",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let defects = r["data"]["stationarity"]["defects"].as_array().unwrap();
    assert_eq!(defects.len(), 3);
    assert!(defects.iter().all(|d| d.as_f64().unwrap() <= 1e-10));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("p,stationarity_defect\n"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn orbitals_of_fourier_4() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("f4.json");
    qpg(&["model", "build", "--spec", "fourier:4", "--output", path(&model)]);
    let out = qpg(&["model", "orbits", "--input", path(&model), "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["data"]["class_count"], 4);
    // the diagonal is one orbital, written 1-based
    assert_eq!(r["data"]["classes"][0][0], serde_json::json!([1, 1]));
}

#[test]
fn csv_needs_a_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = qpg(&[
        "--csv",
        path(&dir.path().join("x.csv")),
        "model",
        "build",
        "--spec",
        "fourier:2",
        "--output",
        path(&dir.path().join("m.json")),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
}

#[test]
fn dita_build_validates() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("h.json");
    let out = qpg(&["hadamard", "build", "--name", "dita:2|2", "--random-q", "--seed", "5", "--output", path(&h)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = qpg(&["hadamard", "validate", "--input", path(&h)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["data"]["size"], 4);
}

#[test]
fn suite_runs_a_selection() {
    let out = qpg(&["suite", "acceptance", "--criteria", "10,11"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    let names: Vec<&str> = r["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.iter().all(|n| n.starts_with("[10]") || n.starts_with("[11]")));

    let out = qpg(&["suite", "acceptance", "--criteria", "13"]);
    assert_eq!(out.status.code(), Some(3));
}
