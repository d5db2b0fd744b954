use hcaa_wasm::{betti_json, bismut_json, classify_json, lattice_json};
use serde_json::Value;

fn parse(s: Result<String, String>) -> Value {
    serde_json::from_str(&s.unwrap()).unwrap()
}

#[test]
fn classify_explorer() {
    let v = parse(classify_json("1", "-3/4", "2", "", "", ""));
    assert_eq!(v["tag"], "g7(-3/4, 2)");
    assert_eq!(v["unimodular"], true);
    let v = parse(classify_json("0", "0", "1", "1", "0", ""));
    assert_eq!(v["tag"], "g5");
    assert!(classify_json("x", "", "", "", "", "").is_err());
    assert!(classify_json("0", "", "", "", "", "1,2").is_err());
}

#[test]
fn bismut_explorer() {
    let v = parse(bismut_json("2", "0", "1", "0", "0", ""));
    assert_eq!(v["hkt"], true);
    assert_eq!(v["c"][0]["value"], "4");
    assert_eq!(v["strong"], false);
    let v = parse(bismut_json("1", "1", "0", "0", "0", ""));
    assert_eq!(v["hkt"], false);
    assert!(v["violation"].is_object());
}

#[test]
fn lattice_and_betti_explorer() {
    let v = parse(lattice_json("g3", 3, 0));
    assert_eq!(v["h1"], "Z^5 + (Z_3)^3");
    let v = parse(lattice_json("ex62", 2, 4));
    assert_eq!(v["h1"], "Z^4 + (Z_2)^8");
    assert!(lattice_json("g3", 0, 0).is_err());
    assert!(lattice_json("nope", 1, 1).is_err());
    let v = parse(betti_json("g3"));
    assert_eq!(v["report"]["betti"], serde_json::json!([1, 5, 16, 30, 36, 30, 16, 5, 1]));
}
