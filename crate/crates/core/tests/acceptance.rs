//! Acceptance run: one line per criterion, with timings.
//!
//! Runs without the libtest harness so the summary is always printed.
//! The process fails on any criterion that is not listed in
//! `KNOWN_DEVIATIONS`; a listed criterion that starts passing also fails
//! the run, so the list cannot go stale.

mod common;

use std::time::{Duration, Instant};

use hcaa::classify::{classify8, family_spec, tag_sweep};
use hcaa::cohomology::{betti, betti_closed_form, salamon_check, wakakuwa_check, ExteriorBasis};
use hcaa::connections::*;
use hcaa::exact::{int, rat, Rat, RatMat};
use hcaa::hypercomplex::verify_hypercomplex;
use hcaa::lattices::{example62_lattice, flat_hk_census, g3_lattice, AbelianizationResult};
use hcaa::liealg::{build_hypercomplex_aa, hyperbolic_family_spec, isomorphic_aa, jacobi_check};
use hcaa::lifts::{ad_matrix_check, iterate_lift, tangent_lift, verify_lift};
use num_traits::Zero;

type Outcome = Result<(), String>;

/// Criteria expected to fail, with the reason.
const KNOWN_DEVIATIONS: &[(usize, &str)] = &[(
    5,
    "Ricci e0 entry: computed -3μ², target +3μ²; every trace convention gives a common sign on all four entries",
)];

fn check(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, budget_s: u64) -> Outcome {
    check(elapsed.as_secs_f64() < budget_s as f64, || {
        format!("took {:.2}s, budget {budget_s}s", elapsed.as_secs_f64())
    })
}

fn c1_betti_g3() -> Outcome {
    let start = Instant::now();
    let (l, _) = build_hypercomplex_aa(&family_spec(&hcaa::classify::FamilyTag::G3).unwrap()).unwrap();
    let b = betti(&l).map_err(|e| e.to_string())?;
    check(b.0 == [1, 5, 16, 30, 36, 30, 16, 5, 1], || format!("got {:?}", b.0))?;
    within(start.elapsed(), 5)
}

fn c2_census() -> Outcome {
    let start = Instant::now();
    let records = flat_hk_census().map_err(|e| e.to_string())?;
    let expect: [(u64, &str); 12] = [
        (1, "Z^8"),
        (2, "Z^4 + (Z_2)^4"),
        (2, "Z^4 + (Z_2)^3"),
        (2, "Z^4 + (Z_2)^2"),
        (2, "Z^4 + Z_2"),
        (3, "Z^4 + (Z_3)^2"),
        (3, "Z^4 + Z_3"),
        (3, "Z^4"),
        (4, "Z^4 + (Z_2)^2"),
        (4, "Z^4 + Z_2"),
        (4, "Z^4"),
        (6, "Z^4"),
    ];
    check(records.len() == 12, || format!("{} records", records.len()))?;
    for (r, (hol, h1)) in records.iter().zip(expect) {
        check(r.holonomy_order == hol && r.h1.to_string() == h1, || {
            format!("{}: ({}, {})", r.name, r.holonomy_order, r.h1)
        })?;
    }
    within(start.elapsed(), 10)
}

fn c3_obata() -> Outcome {
    let mut r = common::rng(2024);
    for k in 0..200 {
        let spec = common::random_spec(&mut r);
        let (l, t) = build_hypercomplex_aa(&spec).map_err(|e| e.to_string())?;
        let c = obata(&l, &t).map_err(|e| format!("spec {k}: {e}"))?;
        let n = l.dim();
        check(torsion_free(&c, &l), || format!("spec {k}: torsion"))?;
        check(t.j.iter().all(|j| is_parallel(&c, j)), || format!("spec {k}: not parallel"))?;
        check(curvature(&c, &l).flat, || format!("spec {k}: curved"))?;
        let mut e0e0 = vec![Rat::zero(); n];
        e0e0[0] = spec.mu.clone();
        e0e0[4..].clone_from_slice(&spec.v0);
        check(c.op_basis(0).column(0) == e0e0, || format!("spec {k}: ∇_e0 e0"))?;
        check((1..n).all(|u| c.op_basis(u).is_zero()), || format!("spec {k}: ∇_u ≠ 0"))?;
    }
    Ok(())
}

fn c4_hkt() -> Outcome {
    let mut r = common::rng(4048);
    for k in 0..200 {
        let spec = common::random_spec(&mut r);
        let (l, t) = build_hypercomplex_aa(&spec).map_err(|e| e.to_string())?;
        let g = Metric::standard(l.dim());
        let b = spec.b_matrix();
        let shape = spec.v_is_zero() && (&b + &b.transpose()).is_zero();
        let hkt = hkt_check(&l, &t, &g).map_err(|e| e.to_string())?.is_none();
        check(hkt == shape, || format!("spec {k}: hkt {hkt}, shape {shape}"))?;
        let conns = t
            .j
            .iter()
            .map(|j| bismut(&l, j, &g).map(|p| p.0))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        check(hkt == (conns[0] == conns[1] && conns[1] == conns[2]), || {
            format!("spec {k}: Bismut equality disagrees")
        })?;
    }
    Ok(())
}

fn c5_bismut() -> Outcome {
    let mut deviations = Vec::new();
    for mu in [int(0), int(1), int(-2), rat(3, 2)] {
        let spec = common::hkt_spec(mu.clone());
        let (l, t) = build_hypercomplex_aa(&spec).map_err(|e| e.to_string())?;
        let g = Metric::standard(8);
        let (b, c) = bismut(&l, &t.j[0], &g).map_err(|e| e.to_string())?;
        let want_c: Vec<_> = if mu.is_zero() { vec![] } else { vec![((1, 2, 3), &mu * int(2))] };
        check(c.nonzero() == want_c, || format!("μ = {mu}: c = {:?}", c.nonzero()))?;

        let dc = d_three_form(&l, &c).map_err(|e| e.to_string())?;
        let top = ExteriorBasis::new(8, 4).unwrap().position(&[0, 1, 2, 3]).unwrap();
        let dc_ok = dc
            .iter()
            .enumerate()
            .all(|(i, v)| *v == if i == top { &mu * &mu * int(-6) } else { int(0) });
        check(dc_ok, || format!("μ = {mu}: dc"))?;

        let curv = curvature(&b, &l);
        for a in 1..4 {
            check(curv.r(0, a) == &b.op_basis(a).scale(&-mu.clone()), || format!("μ = {mu}: R(e0, e{a})"))?;
            let (bb, gg) = (a % 3 + 1, (a + 1) % 3 + 1);
            check(curv.r(a, bb) == &b.op_basis(gg).scale(&(&mu * int(2))), || {
                format!("μ = {mu}: R(e{a}, e{bb})")
            })?;
        }

        let m2 = &mu * &mu;
        let mut target = vec![&m2 * int(3), &m2 * int(-5), &m2 * int(-5), &m2 * int(-5)];
        target.extend(std::iter::repeat_n(int(0), 4));
        let got = ricci_operator(&b, &g, &l);
        if got != RatMat::diag(&target) {
            let d: Vec<String> = (0..4).map(|i| got[(i, i)].to_string()).collect();
            deviations.push(format!("μ = {mu}: r = diag({})", d.join(", ")));
        }
    }
    check(deviations.is_empty(), || deviations.join("; "))
}

fn c6_classify() -> Outcome {
    let tags = tag_sweep();
    let mut mats = Vec::new();
    for tag in &tags {
        let spec = family_spec(tag).map_err(|e| e.to_string())?;
        let back = classify8(&spec).map_err(|e| e.to_string())?;
        check(&back == tag, || format!("{tag} classified as {back}"))?;
        mats.push(spec.a_matrix());
    }
    for i in 0..tags.len() {
        for j in i + 1..tags.len() {
            check(isomorphic_aa(&mats[i], &mats[j]).is_none(), || format!("{} ≅ {}", tags[i], tags[j]))?;
        }
    }
    Ok(())
}

fn c7_closed_form() -> Outcome {
    let start = Instant::now();
    let spec = hyperbolic_family_spec(1).map_err(|e| e.to_string())?;
    let (l, _) = build_hypercomplex_aa(&spec).map_err(|e| e.to_string())?;
    let b = betti(&l).map_err(|e| e.to_string())?;
    let closed = betti_closed_form(1).map_err(|e| e.to_string())?;
    check(b == closed, || format!("{:?} vs {:?}", b.0, closed.0))?;
    check(salamon_check(&b, 3).map_err(|e| e.to_string())?, || "Salamon fails".into())?;
    check(wakakuwa_check(&b), || "Wakakuwa fails".into())?;
    within(start.elapsed(), 60)
}

fn c8_abelianizations() -> Outcome {
    for k in 1..=10u64 {
        let (_, ab) = g3_lattice(k).map_err(|e| e.to_string())?;
        let want = AbelianizationResult::new(5, &vec![k as i64; 3]);
        check(ab == want, || format!("g3, k = {k}: {ab}"))?;
    }
    for n in 1..=2usize {
        for m in 3..=5i64 {
            let (_, ab) = example62_lattice(n, m).map_err(|e| e.to_string())?;
            let want = AbelianizationResult::new(4, &vec![m - 2; 4 * n]);
            check(ab == want, || format!("(n, m) = ({n}, {m}): {ab}"))?;
        }
    }
    Ok(())
}

fn c9_lifts() -> Outcome {
    use hcaa::classify::FamilyTag;
    let start = Instant::now();
    let s4 = hcaa::liealg::AlmostAbelianSpec::scalar(1, int(1));
    for (name, spec) in [
        ("s4", s4.clone()),
        ("g3", family_spec(&FamilyTag::G3).unwrap()),
        ("g5", family_spec(&FamilyTag::G5).unwrap()),
    ] {
        let (l, t) = build_hypercomplex_aa(&spec).map_err(|e| e.to_string())?;
        let c = obata(&l, &t).map_err(|e| e.to_string())?;
        let lift = tangent_lift(&l, &c, &t).map_err(|e| e.to_string())?;
        let rep = verify_lift(&lift, 1);
        check(rep.passed() && rep.clifford_order == 3, || format!("{name}: {rep:?}"))?;
        check(ad_matrix_check(&lift).map_err(|e| e.to_string())?, || format!("{name}: ad matrix"))?;
        let triple = lift.structures.hypercomplex_triple().unwrap();
        check(verify_hypercomplex(&lift.total, &triple).passed(), || format!("{name}: lifted triple"))?;
    }
    let (l, t) = build_hypercomplex_aa(&s4).map_err(|e| e.to_string())?;
    let c = obata(&l, &t).map_err(|e| e.to_string())?;
    let chain = iterate_lift(&l, &c, &t, 3).map_err(|e| e.to_string())?;
    let top = chain.last().unwrap();
    let rep = top.structures.verify();
    check(rep.passed && rep.span_dim == 32 && top.total.dim() == 32, || format!("{rep:?}"))?;
    check(jacobi_check(&top.total).is_empty(), || "stage 3 Jacobi".into())?;
    within(start.elapsed(), 30)
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("Betti numbers of g3", c1_betti_g3),
        ("flat hyper-Kähler census", c2_census),
        ("Obata flatness on 200 random specs", c3_obata),
        ("HKT biconditional on 200 random specs", c4_hkt),
        ("Bismut data on the HKT family", c5_bismut),
        ("classification round trip", c6_classify),
        ("Betti closed form, Salamon, Wakakuwa", c7_closed_form),
        ("lattice abelianizations", c8_abelianizations),
        ("tangent lifts and Clifford structures", c9_lifts),
    ];
    let mut unexpected = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = i + 1;
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        let known = KNOWN_DEVIATIONS.iter().find(|(k, _)| *k == id);
        match (&outcome, known) {
            (Ok(()), None) => println!("criterion {id} PASS  {name} ({secs:.2}s)"),
            (Err(e), Some((_, why))) => {
                println!("criterion {id} FAIL  {name} ({secs:.2}s) [known deviation: {why}] {e}")
            }
            (Err(e), None) => {
                println!("criterion {id} FAIL  {name} ({secs:.2}s) {e}");
                unexpected.push(id);
            }
            (Ok(()), Some(_)) => {
                println!("criterion {id} PASS  {name} ({secs:.2}s) [listed as a known deviation; update the list]");
                unexpected.push(id);
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcomes for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
