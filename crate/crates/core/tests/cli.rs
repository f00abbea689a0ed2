use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_waring-cert")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = cli(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_certify_and_verify_over_a_prime_field() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("e.json");
    let cert = dir.path().join("c.json");
    ok(&["gen", "example18", "--seed", "3", "--p", "1000003", "--out", s(&inst)]);
    let v = json(&inst);
    assert_eq!(v["format"], "waring-cert/instance/v1");
    assert_eq!(v["metadata"]["expected_status"], "NotIdentifiable");
    assert_eq!(v["metadata"]["diagnostics"]["h1_Z(6)"], "1");

    ok(&["certify", "--input", s(&inst), "--out", s(&cert), "--primes", "2,3", "--planes", "8", "--seed", "1"]);
    let c = json(&cert);
    assert_eq!(c["status"], "NotIdentifiable");
    assert_eq!(c["rank_certified"], "18");

    let report: Value = serde_json::from_str(&ok(&["verify", "--input", s(&inst), "--witness", s(&cert)])).unwrap();
    assert_eq!(report["valid"], true);
    assert_eq!(report["residual"]["residual_dims"], serde_json::json!(["2", "17", "38", "66"]));
}

#[test]
fn a_wrong_witness_is_rejected_but_the_run_completes() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("e.json");
    let w = dir.path().join("w.json");
    ok(&["gen", "example18", "--seed", "4", "--p", "1000003", "--out", s(&inst)]);
    std::fs::write(&w, r#"{"w_coordinates": ["1", "0", "0", "0", "0", "0", "0", "0", "0"]}"#).unwrap();
    let report: Value = serde_json::from_str(&ok(&["verify", "--input", s(&inst), "--witness", s(&w)])).unwrap();
    assert_eq!(report["valid"], false);
}

#[test]
fn hilbert_function_and_general_position() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("g.json");
    ok(&["gen", "general", "--length", "12", "--seed", "2", "--out", s(&inst)]);
    let hf: Value = serde_json::from_str(&ok(&["hf", "--input", s(&inst), "--max-degree", "4"])).unwrap();
    assert_eq!(hf["h"], serde_json::json!(["1", "4", "10", "12", "12"]));
    let gp: Value = serde_json::from_str(&ok(&["gp-check", "--input", s(&inst)])).unwrap();
    assert_eq!(gp["general"], true);
}

#[test]
fn gamma_samples_decompose_over_the_points() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("g.json");
    let out = dir.path().join("s.json");
    ok(&["gen", "general", "--length", "18", "--seed", "1", "--p", "1000003", "--out", s(&inst)]);
    ok(&["gamma-sample", "--input", s(&inst), "--count", "2", "--seed", "8", "--out", s(&out)]);
    let v = json(&out);
    let samples = v["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 2);
    for smp in samples {
        assert_eq!(smp["sextic"].as_array().unwrap().len(), 84);
        assert!(smp["coefficients"].as_array().unwrap().iter().all(|c| c != "0"));
    }
}

#[test]
fn curve_generators() {
    let dir = tempfile::tempdir().unwrap();
    let e = dir.path().join("ell.json");
    ok(&["gen", "ell5", "--seed", "0", "--p", "101", "--length", "16", "--out", s(&e)]);
    assert_eq!(json(&e)["field"], "F_101");
    let n = dir.path().join("n.json");
    ok(&["gen", "nodisj17", "--seed", "0", "--out", s(&n)]);
    let v = json(&n);
    assert_eq!(v["points"].as_array().unwrap().len(), 17);
    assert_eq!(v["metadata"]["provenance"]["scope"], "char-p analogue");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(cli(&["hf", "--input", s(&missing)]).status.code(), Some(1));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"field\": \"Q\",\n \"points\": [[\"1\", \"2\"]]}").unwrap();
    let out = cli(&["hf", "--input", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("$.points[0]"));

    let order = dir.path().join("order.json");
    std::fs::write(&order, r#"{"field": "Q", "monomial_order": "grevlex", "points": []}"#).unwrap();
    let out = cli(&["gp-check", "--input", s(&order)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("monomial order"));

    assert_eq!(cli(&["gen", "bogus"]).status.code(), Some(1));
    assert_eq!(cli(&["gen", "general", "--length", "19"]).status.code(), Some(1));
    assert_eq!(cli(&["--help"]).status.code(), Some(0));
}

#[test]
fn redundant_input_is_undecided_not_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("r.json");
    // the sextic is the power of the first point only; the second coefficient is zero
    let mut sextic = vec!["\"0\""; 84];
    sextic[0] = "\"1\"";
    std::fs::write(
        &inst,
        format!(r#"{{"field": "Q", "points": [["1","0","0","0"], ["0","1","0","0"]], "sextic": [{}]}}"#, sextic.join(",")),
    )
    .unwrap();
    let c: Value = serde_json::from_str(&ok(&["certify", "--input", s(&inst)])).unwrap();
    assert_eq!(c["status"], "Undecided");
    assert_eq!(c["reason"], "redundant input");
}

#[test]
fn thread_override_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("g.json");
    ok(&["gen", "general", "--length", "3", "--out", s(&inst)]);
    let out = Command::new(env!("CARGO_BIN_EXE_waring-cert"))
        .args(["hf", "--input", s(&inst)])
        .env("WARING_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_waring-cert"))
        .args(["hf", "--input", s(&inst)])
        .env("WARING_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
}
