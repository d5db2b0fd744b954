use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hcaa"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8"),
    )
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, out) = run(args);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

#[test]
fn verify_passes_on_g5() {
    let (code, v) = run_json(&["verify", "--spec", &data("g5.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "pass");
    let checks = v["results"]["checks"].as_array().unwrap();
    assert!(checks.len() >= 5);
    assert!(checks.iter().all(|c| c["passed"] == true));
    assert_eq!(v["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn verify_reports_jacobi_failure() {
    let (code, v) = run_json(&["verify", "--spec", &data("corrupted.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "fail");
    let jacobi = &v["results"]["checks"][0];
    assert_eq!(jacobi["name"], "jacobi");
    assert_eq!(jacobi["passed"], false);
}

#[test]
fn verify_surfaces_invalid_spec() {
    let (code, v) = run_json(&["verify", "--spec", &data("non_quaternionic.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "error");
    assert!(v["error"].as_str().unwrap().contains("invalid almost abelian spec"));
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let (code, v) = run_json(&["verify", "--spec", &data("malformed.json")]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("malformed JSON"));
    assert_eq!(run(&["betti", "--no-such-flag"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["betti", "--family", "g9"]).0, 1);
    assert_eq!(run(&["betti"]).0, 2);
}

#[test]
fn census_reproduces_the_table() {
    let (code, v) = run_json(&["census"]);
    assert_eq!(code, 0);
    let records = v["results"]["records"].as_array().unwrap();
    let hols: Vec<u64> = records.iter().map(|r| r["holonomy_order"].as_u64().unwrap()).collect();
    assert_eq!(hols, [1, 2, 2, 2, 2, 3, 3, 3, 4, 4, 4, 6]);
    assert!(records.iter().all(|r| r["h1"]["free_rank"].as_u64().unwrap() >= 4));
    assert_eq!(records[1]["h1"]["torsion"], serde_json::json!(["2", "2", "2", "2"]));
    let (_, again) = run_json(&["lattice", "census"]);
    assert_eq!(again["results"], v["results"]);
}

#[test]
fn betti_of_g3_and_closed_form() {
    let (code, v) = run_json(&["betti", "--family", "g3"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["report"]["betti"], serde_json::json!([1, 5, 16, 30, 36, 30, 16, 5, 1]));
    let (code, v) = run_json(&["betti", "--hyperbolic", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["closed_form_matches"], true);
}

#[test]
fn bismut_torsion_form() {
    let (code, v) = run_json(&["connection", "--kind", "bismut", "--spec", &data("hkt.json")]);
    assert_eq!(code, 0);
    // μ = 3/2: c = 3 e^{123}.
    assert_eq!(v["results"]["c_form"], serde_json::json!([[[1, 2, 3], "3"]]));
    assert_eq!(v["results"]["hkt"], true);
    assert_eq!(v["results"]["dc_zero"], false);
    let (code, o) = run_json(&["connection", "obata", "--spec", &data("hkt.json")]);
    assert_eq!(code, 0);
    assert_eq!(o["results"]["flat"], true);
    assert_eq!(run(&["connection", "obata", "--kind", "lc", "--spec", &data("hkt.json")]).0, 2);
}

#[test]
fn classify8_spec_and_family() {
    let (code, v) = run_json(&["classify8", "--spec", &data("g2_unimodular.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["tag"], "g2(-3/4)");
    assert_eq!(v["results"]["unimodular"], true);
    assert_eq!(v["results"]["lattices"], "rejects");
    let (_, v) = run_json(&["classify8", "--family", "g7(1, 2)"]);
    assert_eq!(v["results"]["tag"], "g7(1, 2)");
    assert_eq!(v["results"]["witness_scalar"], "1");
}

#[test]
fn lattice_subcommands() {
    let id = data("identity7.json");
    let (code, v) = run_json(&["lattice", "verify", "--time", "2pi", "--e", &id]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["accepted"], true);
    let (code, _) = run_json(&["lattice", "verify", "--time", r#"{"kind": "two_pi_over", "m": 3}"#, "--e", &id]);
    assert_eq!(code, 1);
    let (_, v) = run_json(&["lattice", "g3", "--k", "4"]);
    assert_eq!(v["results"]["h1"], "Z^5 + (Z_4)^3");
    let (_, v) = run_json(&["lattice", "ex62", "--n", "1", "--m", "5"]);
    assert_eq!(v["results"]["h1"], "Z^4 + (Z_3)^4");
    let (code, v) = run_json(&["lattice", "abelianization", "--e", &id]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["h1"], "Z^8");
    assert_eq!(v["results"]["holonomy_order"], 1);
    let (code, v) = run_json(&["lattice", "nonexistence", "--kmax", "6", "--jmax", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["solutions"], serde_json::json!([[3, 4]]));
}

#[test]
fn lift_and_determinism() {
    let args = ["lift", "--spec", &data("s4.json"), "--iterations", "3"];
    let (code, first) = run(&args);
    assert_eq!(code, 0);
    let (_, second) = run(&args);
    assert_eq!(first, second);
    let v: Value = serde_json::from_str(&first).unwrap();
    let stages = v["results"]["stages"].as_array().unwrap();
    assert_eq!(stages.len(), 3);
    assert_eq!(stages[2]["clifford_span_dim"], 32);
    assert_eq!(v["results"]["ad_matrix_check"], true);

    let (code, v) = run_json(&["lift", "--spec", &data("g5.json"), "--tangent-bundle"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["hypercomplex"], true);
    assert_eq!(v["results"]["dim"], 16);
}

#[test]
fn table_output() {
    let (code, out) = run(&["--output", "table", "betti", "--family", "g5"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("status") && l.ends_with("pass")));
    assert!(out.lines().any(|l| l.starts_with("results.report.betti")));
}
