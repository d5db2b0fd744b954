//! One function per subcommand. Each returns a JSON results object and
//! whether every mathematical check in it passed.

use hcaa::classify::{classify8_matrix, classify_report, family_algebra, family_spec, FamilyTag};
use hcaa::cohomology::{betti_closed_form, betti_report};
use hcaa::connections::{
    bismut, curvature, d_three_form, hkt_check, is_metric, is_parallel, levi_civita, obata, ricci_operator,
    strong_hkt, torsion_free, Connection, Metric,
};
use hcaa::exact::RatMat;
use hcaa::hypercomplex::{canonical_triple, verify_hypercomplex, HypercomplexTriple};
use hcaa::lattices::{
    abelianization, example62_lattice, flat_hk_census, g3_lattice, holonomy_order, nonexistence_exponent_check,
    verify_lattice_witness, SpecialTime,
};
use hcaa::liealg::{build_hypercomplex_aa, hyperbolic_family_spec, jacobi_check, AlmostAbelianSpec, LieAlgebra};
use hcaa::lifts::{iterate_lift, iterated_ad_matrix_check, tangent_bundle_actions, tangent_bundle_algebra, verify_lift};
use serde::Serialize;
use serde_json::{json, Value};

use crate::input::{algebra_json, matrix_json, InputError, Structure};

/// A failed run: bad input (exit 2) or a library error (exit 1).
#[derive(Debug)]
pub enum CmdError {
    Input(InputError),
    Math(hcaa::Error),
}

impl From<InputError> for CmdError {
    fn from(e: InputError) -> Self {
        CmdError::Input(e)
    }
}

impl From<hcaa::Error> for CmdError {
    fn from(e: hcaa::Error) -> Self {
        CmdError::Math(e)
    }
}

pub struct Outcome {
    pub results: Value,
    pub passed: bool,
}

pub type CmdResult = Result<Outcome, CmdError>;

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report types serialize")
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

fn check(name: &'static str, passed: bool, detail: Option<String>) -> Check {
    Check { name, passed, detail }
}

/// The algebra with a hypercomplex triple when one is available: specs use
/// their own, actions of size `4n - 1` the canonical one.
fn with_triple(s: &Structure) -> hcaa::Result<(LieAlgebra, Option<HypercomplexTriple>)> {
    match s {
        Structure::Spec(spec) => {
            let (l, t) = build_hypercomplex_aa(spec)?;
            Ok((l, Some(t)))
        }
        Structure::Action(a) => {
            let l = s.algebra()?;
            let t = (a.rows() % 4 == 3).then(|| canonical_triple(a.rows().div_ceil(4)));
            Ok((l, t))
        }
        Structure::Algebra(l) => Ok((l.clone(), None)),
    }
}

pub fn verify(s: &Structure) -> CmdResult {
    let (l, t) = with_triple(s)?;
    let mut checks = Vec::new();
    let bad = jacobi_check(&l);
    checks.push(check(
        "jacobi",
        bad.is_empty(),
        bad.first().map(|(i, j, k)| format!("fails on (e{i}, e{j}, e{k}); {} failing triples", bad.len())),
    ));
    match &t {
        Some(t) => {
            let rep = verify_hypercomplex(&l, t);
            checks.push(check(
                "hypercomplex",
                rep.passed(),
                (!rep.failures.is_empty()).then(|| rep.failures.join("; ")),
            ));
            match obata(&l, t) {
                Ok(c) => {
                    checks.push(check("obata_torsion_free", torsion_free(&c, &l), None));
                    checks.push(check("obata_flat", curvature(&c, &l).flat, None));
                    checks.push(check("obata_parallel", t.j.iter().all(|j| is_parallel(&c, j)), None));
                }
                Err(e) => checks.push(check("obata", false, Some(e.to_string()))),
            }
        }
        None => checks.push(check("hypercomplex", true, Some("skipped: no triple for a bare algebra".into()))),
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(Outcome {
        results: json!({ "input": s.kind(), "dim": l.dim(), "checks": checks }),
        passed,
    })
}

pub fn betti_cmd(family: Option<&str>, structure: Option<&Structure>, hyperbolic: Option<u64>) -> CmdResult {
    let (label, l) = match (family, structure, hyperbolic) {
        (Some(f), None, None) => {
            let tag: FamilyTag = f.parse()?;
            (tag.to_string(), family_algebra(&tag)?.0)
        }
        (None, Some(s), None) => (s.kind().to_string(), s.algebra()?),
        (None, None, Some(n)) => {
            let spec = hyperbolic_family_spec(n as usize)?;
            (format!("hyperbolic({n})"), build_hypercomplex_aa(&spec)?.0)
        }
        _ => return Err(InputError("give exactly one of --family, --spec, --hyperbolic".into()).into()),
    };
    let report = betti_report(&l)?;
    let mut results = json!({ "algebra": label, "dim": l.dim(), "report": report });
    let mut passed = true;
    if let Some(n) = hyperbolic {
        let closed = betti_closed_form(n)?;
        passed = closed.0 == report.betti;
        results["closed_form"] = to_value(&closed.0);
        results["closed_form_matches"] = passed.into();
    }
    Ok(Outcome { results, passed })
}

pub fn classify_cmd(family: Option<&str>, structure: Option<&Structure>) -> CmdResult {
    let spec: AlmostAbelianSpec = match (family, structure) {
        (Some(f), None) => family_spec(&f.parse()?)?,
        (None, Some(Structure::Spec(s))) => s.clone(),
        (None, Some(Structure::Action(a))) => classify8_matrix(a)?.1,
        (None, Some(Structure::Algebra(_))) => {
            return Err(InputError("classify8 needs a spec or a 7x7 action".into()).into())
        }
        _ => return Err(InputError("give exactly one of --family, --spec".into()).into()),
    };
    let report = classify_report(&spec)?;
    Ok(Outcome {
        results: to_value(&report),
        passed: true,
    })
}

pub fn census() -> CmdResult {
    let records = flat_hk_census()?;
    Ok(Outcome {
        results: json!({ "records": records }),
        passed: true,
    })
}

pub fn lattice_verify(a: &RatMat, time: &SpecialTime, e: &RatMat) -> CmdResult {
    let cert = verify_lattice_witness(a, time, e)?;
    Ok(Outcome {
        passed: cert.accepted,
        results: to_value(&cert),
    })
}

pub fn lattice_abelianization(e: &RatMat) -> CmdResult {
    let ab = abelianization(e)?;
    let hol = holonomy_order(e)?;
    Ok(Outcome {
        results: json!({ "h1": ab.to_string(), "abelianization": ab, "holonomy_order": hol }),
        passed: true,
    })
}

pub fn lattice_g3(k: u64) -> CmdResult {
    let (e, ab) = g3_lattice(k)?;
    Ok(Outcome {
        results: json!({ "k": k, "witness": matrix_json(&e), "h1": ab.to_string(), "abelianization": ab }),
        passed: true,
    })
}

pub fn lattice_ex62(n: usize, m: i64) -> CmdResult {
    let (e, ab) = example62_lattice(n, m)?;
    Ok(Outcome {
        results: json!({ "n": n, "m": m, "witness": matrix_json(&e), "h1": ab.to_string(), "abelianization": ab }),
        passed: true,
    })
}

pub fn lattice_nonexistence(kmax: u32, jmax: u32) -> CmdResult {
    let hits = nonexistence_exponent_check(kmax, jmax);
    Ok(Outcome {
        passed: true,
        results: json!({ "kmax": kmax, "jmax": jmax, "solutions": hits }),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ConnectionKind {
    Obata,
    Lc,
    Bismut,
}

#[derive(Serialize)]
struct ConnectionReport {
    kind: &'static str,
    dim: usize,
    torsion_zero: bool,
    flat: bool,
    parallel_structures: Vec<bool>,
    metric: Option<bool>,
    c_form: Vec<(Vec<usize>, String)>,
    dc_zero: Option<bool>,
    ricci_diag: Vec<String>,
    hkt: Option<bool>,
    connection: Vec<Value>,
}

fn spec_of(s: &Structure) -> Result<AlmostAbelianSpec, CmdError> {
    match s {
        Structure::Spec(spec) => Ok(spec.clone()),
        Structure::Action(a) if a.rows() == 7 => Ok(classify8_matrix(a)?.1),
        _ => Err(InputError("connections need a block spec (or a 7x7 action)".into()).into()),
    }
}

fn ops_json(c: &Connection) -> Vec<Value> {
    c.ops().iter().map(matrix_json).collect()
}

pub fn connection_cmd(kind: ConnectionKind, s: &Structure, structure: usize) -> CmdResult {
    if !(1..=3).contains(&structure) {
        return Err(InputError("--structure must be 1, 2 or 3".into()).into());
    }
    let spec = spec_of(s)?;
    let (l, t) = build_hypercomplex_aa(&spec)?;
    let g = Metric::standard(l.dim());
    let (c, c_form, dc_zero, hkt) = match kind {
        ConnectionKind::Obata => (obata(&l, &t)?, Vec::new(), None, None),
        ConnectionKind::Lc => (levi_civita(&l, &g)?, Vec::new(), None, None),
        ConnectionKind::Bismut => {
            let (b, form) = bismut(&l, &t.j[structure - 1], &g)?;
            let dc = d_three_form(&l, &form)?;
            let nz = form
                .nonzero()
                .into_iter()
                .map(|((i, j, k), v)| (vec![i, j, k], v.to_string()))
                .collect();
            let hkt = hkt_check(&l, &t, &g)?.is_none();
            debug_assert_eq!(strong_hkt(&l, &form)?, dc.iter().all(|x| num_traits::Zero::is_zero(x)));
            (b, nz, Some(dc.iter().all(num_traits::Zero::is_zero)), Some(hkt))
        }
    };
    let curv = curvature(&c, &l);
    let r = ricci_operator(&c, &g, &l);
    let report = ConnectionReport {
        kind: match kind {
            ConnectionKind::Obata => "obata",
            ConnectionKind::Lc => "levi-civita",
            ConnectionKind::Bismut => "bismut",
        },
        dim: l.dim(),
        torsion_zero: torsion_free(&c, &l),
        flat: curv.flat,
        parallel_structures: t.j.iter().map(|j| is_parallel(&c, j)).collect(),
        metric: (kind != ConnectionKind::Obata).then(|| is_metric(&c, &g)),
        c_form,
        dc_zero,
        ricci_diag: (0..l.dim()).map(|i| r[(i, i)].to_string()).collect(),
        hkt,
        connection: ops_json(&c),
    };
    let passed = match kind {
        ConnectionKind::Obata => report.torsion_zero && report.flat && report.parallel_structures.iter().all(|&p| p),
        ConnectionKind::Lc => report.torsion_zero && report.metric == Some(true),
        ConnectionKind::Bismut => report.metric == Some(true) && report.parallel_structures[structure - 1],
    };
    Ok(Outcome {
        results: to_value(&report),
        passed,
    })
}

pub fn lift_cmd(s: &Structure, iterations: usize, tangent_bundle: bool) -> CmdResult {
    let (l, t) = with_triple(s)?;
    if tangent_bundle {
        let (tg, lifted) = tangent_bundle_algebra(&l, t.as_ref())?;
        let jacobi = jacobi_check(&tg).is_empty();
        let hyper = lifted.as_ref().map(|t| verify_hypercomplex(&tg, t).passed());
        let actions = tangent_bundle_actions(&tg).ok().map(|(a1, a2)| json!({ "a1": matrix_json(&a1), "a2": matrix_json(&a2) }));
        return Ok(Outcome {
            passed: jacobi && hyper != Some(false),
            results: json!({
                "construction": "tangent_bundle",
                "dim": tg.dim(),
                "jacobi": jacobi,
                "hypercomplex": hyper,
                "unimodular": hcaa::liealg::unimodular(&tg),
                "actions": actions,
                "algebra": algebra_json(&tg),
            }),
        });
    }
    let t = t.ok_or_else(|| InputError("tangent lifts need a spec or a hypercomplex-shaped action".into()))?;
    let c = obata(&l, &t)?;
    let chain = iterate_lift(&l, &c, &t, iterations)?;
    let reports: Vec<_> = chain.iter().enumerate().map(|(k, s)| verify_lift(s, k + 1)).collect();
    let ad = iterated_ad_matrix_check(&chain)?;
    let top = chain.last().expect("at least one stage");
    Ok(Outcome {
        passed: ad && reports.iter().all(|r| r.passed()),
        results: json!({
            "construction": "tangent_lift",
            "iterations": iterations,
            "stages": reports,
            "ad_matrix_check": ad,
            "structures": top.structures.labels,
            "algebra": algebra_json(&top.total),
        }),
    })
}
