//! JSON input formats.
//!
//! Rationals are strings `"p/q"` (plain JSON integers are accepted too) and
//! matrices are row-major arrays. A structure file is one of
//!
//! * a block spec: `{"n": 2, "mu": "1", "v0": [..], "x": [[..]], "y": .., "z": .., "w": ..}`,
//!   or with the whole `"b"` matrix instead of its four blocks
//! * an almost abelian action: `{"a": [[..], ..]}`
//! * a bare algebra: `{"dim": 3, "brackets": [[i, j, [c_0, .., c_{dim-1}]], ..]}`
//!   listing `[e_i, e_j]` for `i < j`.

use std::fmt;

use hcaa::exact::{parse_rat, Rat, RatMat};
use hcaa::lattices::SpecialTime;
use hcaa::liealg::{build_almost_abelian, AlmostAbelianSpec, LieAlgebra};
use serde::Deserialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Anything wrong with the input itself (exit status 2).
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

pub type InputResult<T> = Result<T, InputError>;

/// Raw bytes of every file read, for the run digest.
#[derive(Default)]
pub struct Digest256 {
    hasher: Sha256,
}

impl Digest256 {
    pub fn update(&mut self, label: &str, bytes: &[u8]) {
        self.hasher.update((label.len() as u64).to_le_bytes());
        self.hasher.update(label.as_bytes());
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    pub fn hex(self) -> String {
        self.hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

pub fn read_json(path: &str, digest: &mut Digest256) -> InputResult<Value> {
    let bytes = std::fs::read(path).map_err(|e| InputError(format!("cannot read {path}: {e}")))?;
    digest.update(path, &bytes);
    serde_json::from_slice(&bytes).map_err(|e| InputError(format!("{path}: malformed JSON: {e}")))
}

fn rat_value(v: &Value, ctx: &str) -> InputResult<Rat> {
    match v {
        Value::String(s) => parse_rat(s).map_err(|e| InputError(format!("{ctx}: {e}"))),
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rat::from_integer(i.into()))
            .ok_or_else(|| InputError(format!("{ctx}: non-integer number {n}; write fractions as \"p/q\""))),
        other => Err(InputError(format!("{ctx}: expected a rational, got {other}"))),
    }
}

pub fn rat_vec(v: &Value, ctx: &str) -> InputResult<Vec<Rat>> {
    v.as_array()
        .ok_or_else(|| InputError(format!("{ctx}: expected an array")))?
        .iter()
        .enumerate()
        .map(|(i, x)| rat_value(x, &format!("{ctx}[{i}]")))
        .collect()
}

pub fn rat_matrix(v: &Value, ctx: &str) -> InputResult<RatMat> {
    let rows = v
        .as_array()
        .ok_or_else(|| InputError(format!("{ctx}: expected an array of rows")))?
        .iter()
        .enumerate()
        .map(|(i, r)| rat_vec(r, &format!("{ctx}[{i}]")))
        .collect::<InputResult<Vec<_>>>()?;
    if rows.is_empty() {
        return Ok(RatMat::zeros(0, 0));
    }
    RatMat::from_rows(rows).map_err(|e| InputError(format!("{ctx}: {e}")))
}

pub fn rat_arg(s: &str, ctx: &str) -> InputResult<Rat> {
    parse_rat(s).map_err(|e| InputError(format!("{ctx}: {e}")))
}

/// `"2pi/3"`-style strings or `{"kind": "two_pi_over", "m": 3}`.
pub fn parse_time(s: &str) -> InputResult<SpecialTime> {
    let s = s.trim();
    if !s.starts_with('{') {
        return s.parse().map_err(|e| InputError(format!("time: {e}")));
    }
    #[derive(Deserialize)]
    struct Tagged {
        kind: String,
        m: Option<i64>,
        t: Option<String>,
    }
    let t: Tagged = serde_json::from_str(s).map_err(|e| InputError(format!("time: {e}")))?;
    let m = || t.m.ok_or_else(|| InputError("time: missing \"m\"".into()));
    match t.kind.as_str() {
        "two_pi_over" => {
            let m = u32::try_from(m()?).map_err(|_| InputError("time: m must be positive".into()))?;
            Ok(SpecialTime::RationalMultipleOfTwoPi(m))
        }
        "hyperbolic_log" => Ok(SpecialTime::HyperbolicLog(m()?)),
        "rational" => {
            let v = t.t.as_deref().ok_or_else(|| InputError("time: missing \"t\"".into()))?;
            Ok(SpecialTime::RationalTime(rat_arg(v, "time")?))
        }
        other => Err(InputError(format!("time: unknown kind {other:?}"))),
    }
}

/// A parsed structure file.
pub enum Structure {
    Spec(AlmostAbelianSpec),
    Action(RatMat),
    Algebra(LieAlgebra),
}

impl Structure {
    pub fn kind(&self) -> &'static str {
        match self {
            Structure::Spec(_) => "spec",
            Structure::Action(_) => "action",
            Structure::Algebra(_) => "algebra",
        }
    }

    /// The algebra itself; a library failure here is a mathematical one.
    pub fn algebra(&self) -> hcaa::Result<LieAlgebra> {
        match self {
            Structure::Spec(s) => Ok(hcaa::liealg::build_hypercomplex_aa(s)?.0),
            Structure::Action(a) => build_almost_abelian(a),
            Structure::Algebra(l) => Ok(l.clone()),
        }
    }
}

fn field<'a>(obj: &'a Value, key: &str) -> InputResult<&'a Value> {
    obj.get(key).ok_or_else(|| InputError(format!("missing field {key:?}")))
}

/// Spec fields are parsed here; whether they form a valid spec is left to
/// the library, so that a non-quaternionic `B` is a mathematical failure.
pub fn parse_structure(v: &Value) -> InputResult<Result<Structure, hcaa::Error>> {
    if !v.is_object() {
        return Err(InputError("expected a JSON object".into()));
    }
    if let Some(a) = v.get("a") {
        return Ok(Ok(Structure::Action(rat_matrix(a, "a")?)));
    }
    if v.get("brackets").is_some() {
        let dim = field(v, "dim")?
            .as_u64()
            .ok_or_else(|| InputError("dim: expected a non-negative integer".into()))? as usize;
        let mut l = LieAlgebra::abelian(dim);
        let list = field(v, "brackets")?
            .as_array()
            .ok_or_else(|| InputError("brackets: expected an array".into()))?;
        for (k, entry) in list.iter().enumerate() {
            let ctx = format!("brackets[{k}]");
            let parts = entry
                .as_array()
                .filter(|p| p.len() == 3)
                .ok_or_else(|| InputError(format!("{ctx}: expected [i, j, [coefficients]]")))?;
            let idx = |p: &Value| -> InputResult<usize> {
                p.as_u64()
                    .map(|x| x as usize)
                    .filter(|&x| x < dim)
                    .ok_or_else(|| InputError(format!("{ctx}: index out of range")))
            };
            let (i, j) = (idx(&parts[0])?, idx(&parts[1])?);
            let c = rat_vec(&parts[2], &ctx)?;
            if c.len() != dim || i == j {
                return Err(InputError(format!("{ctx}: need i != j and {dim} coefficients")));
            }
            if i < j {
                l.set_bracket(i, j, &c);
            } else {
                let neg: Vec<Rat> = c.iter().map(|x| -x).collect();
                l.set_bracket(j, i, &neg);
            }
        }
        return Ok(Ok(Structure::Algebra(l)));
    }
    let n = field(v, "n")?
        .as_u64()
        .ok_or_else(|| InputError("n: expected a positive integer".into()))? as usize;
    let mu = rat_value(field(v, "mu")?, "mu")?;
    let m = n.saturating_sub(1);
    let block = |key: &str| -> InputResult<RatMat> {
        match v.get(key) {
            Some(b) if m > 0 => rat_matrix(b, key),
            _ => Ok(RatMat::zeros(m, m)),
        }
    };
    let v0 = match v.get("v0") {
        Some(x) => rat_vec(x, "v0")?,
        None => vec![Rat::from_integer(0.into()); 4 * m],
    };
    if let Some(b) = v.get("b") {
        return Ok(AlmostAbelianSpec::from_b(n, mu, v0, &rat_matrix(b, "b")?).map(Structure::Spec));
    }
    let (x, y, z, w) = (block("x")?, block("y")?, block("z")?, block("w")?);
    Ok(AlmostAbelianSpec::new(n, mu, v0, x, y, z, w).map(Structure::Spec))
}

pub fn structure_from_file(path: &str, digest: &mut Digest256) -> InputResult<Result<Structure, hcaa::Error>> {
    parse_structure(&read_json(path, digest)?)
}

/// A bare matrix file: either `[[..]]` or `{"a": [[..]]}` / `{"e": [[..]]}`.
pub fn matrix_from_file(path: &str, digest: &mut Digest256) -> InputResult<RatMat> {
    let v = read_json(path, digest)?;
    let m = match &v {
        Value::Array(_) => &v,
        Value::Object(o) => o
            .get("a")
            .or_else(|| o.get("e"))
            .or_else(|| o.get("matrix"))
            .ok_or_else(|| InputError(format!("{path}: expected a matrix")))?,
        _ => return Err(InputError(format!("{path}: expected a matrix"))),
    };
    rat_matrix(m, path)
}

pub fn matrix_json(m: &RatMat) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|x| Value::String(x.to_string())).collect()))
            .collect(),
    )
}

/// `{"dim": d, "brackets": [[i, j, [..]], ..]}`, nonzero brackets only.
pub fn algebra_json(l: &LieAlgebra) -> Value {
    let d = l.dim();
    let mut out = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let b = l.basis_bracket(i, j);
            if b.is_empty() {
                continue;
            }
            let mut dense = vec![Value::String("0".into()); d];
            for (k, c) in b {
                dense[*k] = Value::String(c.to_string());
            }
            out.push(Value::Array(vec![i.into(), j.into(), Value::Array(dense)]));
        }
    }
    serde_json::json!({ "dim": d, "brackets": out })
}
