//! Browser bindings for three explorers: the 8-dimensional classification,
//! Bismut/HKT data for a block spec, and lattice abelianizations with
//! Betti numbers.
//!
//! Every export takes plain strings and returns a JSON string. The `*_json`
//! functions hold the logic so they can be tested natively.

use hcaa::classify::{classify_report, family_algebra, FamilyTag};
use hcaa::cohomology::betti_report;
use hcaa::connections::{bismut, d_three_form, hkt_check, ricci_operator, Metric};
use hcaa::exact::{parse_rat, Rat, RatMat};
use hcaa::lattices::{example62_lattice, g3_lattice};
use hcaa::liealg::{build_hypercomplex_aa, AlmostAbelianSpec};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Spec of quaternionic dimension 2 from `μ`, the quaternion `(x, y, z, w)`
/// of `B` and `v0` as four comma-separated rationals (empty for zero).
pub fn spec8(mu: &str, x: &str, y: &str, z: &str, w: &str, v0: &str) -> Result<AlmostAbelianSpec, String> {
    let r = |s: &str| -> Result<Rat, String> {
        let s = s.trim();
        parse_rat(if s.is_empty() { "0" } else { s }).map_err(err)
    };
    let one = |s: &str| -> Result<RatMat, String> { Ok(RatMat::scalar(1, &r(s)?)) };
    let v0: Vec<Rat> = if v0.trim().is_empty() {
        vec![Rat::from_integer(0.into()); 4]
    } else {
        v0.split(',').map(r).collect::<Result<_, _>>()?
    };
    AlmostAbelianSpec::new(2, r(mu)?, v0, one(x)?, one(y)?, one(z)?, one(w)?).map_err(err)
}

pub fn classify_json(mu: &str, x: &str, y: &str, z: &str, w: &str, v0: &str) -> Result<String, String> {
    let spec = spec8(mu, x, y, z, w, v0)?;
    let report = classify_report(&spec).map_err(err)?;
    serde_json::to_string(&report).map_err(err)
}

pub fn bismut_json(mu: &str, x: &str, y: &str, z: &str, w: &str, v0: &str) -> Result<String, String> {
    let spec = spec8(mu, x, y, z, w, v0)?;
    let (l, t) = build_hypercomplex_aa(&spec).map_err(err)?;
    let g = Metric::standard(8);
    let violation = hkt_check(&l, &t, &g).map_err(err)?;
    let (b, c) = bismut(&l, &t.j[0], &g).map_err(err)?;
    let dc = d_three_form(&l, &c).map_err(err)?;
    let r = ricci_operator(&b, &g, &l);
    let c_form: Vec<_> = c
        .nonzero()
        .into_iter()
        .map(|((i, j, k), v)| json!({ "indices": [i, j, k], "value": v.to_string() }))
        .collect();
    let dc_nonzero = dc.iter().filter(|x| !num_traits::Zero::is_zero(*x)).count();
    let out = json!({
        "hkt": violation.is_none(),
        "violation": violation,
        "c": c_form,
        "strong": dc_nonzero == 0,
        "dc_nonzero_components": dc_nonzero,
        "ricci_diag": (0..8).map(|i| r[(i, i)].to_string()).collect::<Vec<_>>(),
    });
    Ok(out.to_string())
}

/// `kind` is `g3` (parameter `k`) or `ex62` (parameters `n`, `m`).
pub fn lattice_json(kind: &str, a: i64, b: i64) -> Result<String, String> {
    let positive = |x: i64, name: &str| -> Result<u64, String> {
        u64::try_from(x).ok().filter(|&v| v > 0).ok_or_else(|| format!("{name} must be positive"))
    };
    let (e, ab) = match kind {
        "g3" => g3_lattice(positive(a, "k")?).map_err(err)?,
        "ex62" => example62_lattice(positive(a, "n")? as usize, b).map_err(err)?,
        other => return Err(format!("unknown lattice family {other:?}")),
    };
    let rows: Vec<Vec<String>> = (0..e.rows()).map(|i| e.row(i).iter().map(ToString::to_string).collect()).collect();
    Ok(json!({ "h1": ab.to_string(), "witness": rows }).to_string())
}

pub fn betti_json(tag: &str) -> Result<String, String> {
    let tag: FamilyTag = tag.parse().map_err(err)?;
    let (l, _) = family_algebra(&tag).map_err(err)?;
    let report = betti_report(&l).map_err(err)?;
    serde_json::to_string(&json!({ "tag": tag.to_string(), "report": report })).map_err(err)
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn classify(mu: &str, x: &str, y: &str, z: &str, w: &str, v0: &str) -> Result<String, JsValue> {
    js(classify_json(mu, x, y, z, w, v0))
}

#[wasm_bindgen]
pub fn bismut_data(mu: &str, x: &str, y: &str, z: &str, w: &str, v0: &str) -> Result<String, JsValue> {
    js(bismut_json(mu, x, y, z, w, v0))
}

#[wasm_bindgen]
pub fn lattice(kind: &str, a: i64, b: i64) -> Result<String, JsValue> {
    js(lattice_json(kind, a, b))
}

#[wasm_bindgen]
pub fn betti(tag: &str) -> Result<String, JsValue> {
    js(betti_json(tag))
}
