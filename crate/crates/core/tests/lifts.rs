mod common;

use hcaa::classify::{family_algebra, family_spec, FamilyTag};
use hcaa::connections::{levi_civita, obata, Connection, Metric};
use hcaa::error::Error;
use hcaa::exact::{int, Rat, RatMat};
use hcaa::hypercomplex::{canonical_triple, nijenhuis_violation, verify_hypercomplex, HypercomplexTriple};
use hcaa::liealg::{
    build_hypercomplex_aa, hyperbolic_family_spec, jacobi_check, nilpotency_data, s4, unimodular, AlmostAbelianSpec,
    LieAlgebra,
};
use hcaa::lifts::*;
use num_traits::Zero;
use proptest::prelude::*;

fn with_obata(spec: &AlmostAbelianSpec) -> (LieAlgebra, Connection, HypercomplexTriple) {
    let (l, t) = build_hypercomplex_aa(spec).unwrap();
    let c = obata(&l, &t).unwrap();
    (l, c, t)
}

fn s4_data() -> (LieAlgebra, Connection, HypercomplexTriple) {
    with_obata(&AlmostAbelianSpec::scalar(1, int(1)))
}

/// `Ã` written directly from the block data.
fn a_tilde_from_spec(spec: &AlmostAbelianSpec) -> RatMat {
    let a = spec.a_matrix();
    let d = a.rows();
    let mut m = RatMat::zeros(d + 1, d + 1);
    m[(0, 0)] = spec.mu.clone();
    for (i, v) in spec.v0.iter().enumerate() {
        m[(4 + i, 0)] = v.clone();
    }
    m.set_block(1, 1, &a);
    m
}

#[test]
fn s4_lift() {
    let (l, c, t) = s4_data();
    assert_eq!(l, s4());
    let lift = tangent_lift(&l, &c, &t).unwrap();
    let report = verify_lift(&lift, 1);
    assert!(report.passed(), "{report:?}");
    assert_eq!(report.clifford_order, 3);
    assert_eq!(report.clifford_span_dim, 8);
    let expected = RatMat::block_diag(&[&RatMat::zeros(1, 1), &RatMat::identity(3), &RatMat::identity(4)]);
    assert_eq!(lift.total.ad_basis(0), expected);
    assert!(ad_matrix_check(&lift).unwrap());
}

#[test]
fn family_lifts() {
    for tag in [FamilyTag::G3, FamilyTag::G5, FamilyTag::G4, FamilyTag::g7(int(1), int(2))] {
        let spec = family_spec(&tag).unwrap();
        let (l, c, t) = with_obata(&spec);
        let lift = tangent_lift(&l, &c, &t).unwrap();
        let report = verify_lift(&lift, 1);
        assert!(report.passed(), "{tag}: {report:?}");
        assert!(ad_matrix_check(&lift).unwrap(), "{tag}");
        let a = spec.a_matrix();
        let direct = RatMat::block_diag(&[&RatMat::zeros(1, 1), &a, &a_tilde_from_spec(&spec)]);
        assert_eq!(lift.total.ad_basis(0), direct, "{tag}");
    }
    // g3: v0 = f sits in the first column of Ã.
    let spec = family_spec(&FamilyTag::G3).unwrap();
    let at = a_tilde(&spec.a_matrix()).unwrap();
    assert_eq!(at[(4, 0)], int(1));
    assert!(at[(0, 0)].is_zero());
}

#[test]
fn corrupted_lift_fails_ad_check() {
    let (l, c, t) = with_obata(&family_spec(&FamilyTag::G3).unwrap());
    let lift = tangent_lift(&l, &c, &t).unwrap();
    let n = lift.total.dim();
    let d = n / 2;
    let swap = |i: usize| (i + d) % n;
    let mut corrupted = lift.clone();
    corrupted.total = LieAlgebra::from_bracket_fn(n, |i, j| {
        let v: Vec<Rat> = (0..n).map(|k| lift.total.constant(swap(i), swap(j), swap(k))).collect();
        v
    });
    assert!(!ad_matrix_check(&corrupted).unwrap());
}

#[test]
fn lifted_hypercomplex_triple() {
    let spec = family_spec(&FamilyTag::G5).unwrap();
    let (l, c, t) = with_obata(&spec);
    let lift = tangent_lift(&l, &c, &t).unwrap();
    let triple = lift.structures.hypercomplex_triple().unwrap();
    assert!(verify_hypercomplex(&lift.total, &triple).passed());
    // The product of the two lifted generators is J3 ⊕ J3.
    assert_eq!(triple.j[2], RatMat::block_diag(&[&t.j[2], &t.j[2]]));
    // J3 ⊕ (-J3) is still integrable but not the quaternionic product.
    let j3_minus = RatMat::block_diag(&[&t.j[2], &-&t.j[2]]);
    assert!(nijenhuis_violation(&lift.total, &j3_minus).is_none());
    assert_ne!(triple.j[2], j3_minus);
    let k = &lift.structures.gens[2];
    for j in &lift.structures.gens[..2] {
        assert!((&k.matmul(j) + &j.matmul(k)).is_zero());
    }
}

#[test]
fn abelian_lift() {
    let l = LieAlgebra::abelian(4);
    let t = canonical_triple(1);
    let lift = tangent_lift(&l, &Connection::zero(4), &t).unwrap();
    assert!(lift.total.is_abelian());
    let k = &lift.structures.gens[2];
    assert_eq!(k.matmul(k), -RatMat::identity(8));
    assert!(verify_lift(&lift, 1).passed());
}

#[test]
fn non_flat_or_torsive_connections_rejected() {
    let (l, _, t) = s4_data();
    let lc = levi_civita(&l, &Metric::standard(4)).unwrap();
    assert!(matches!(tangent_lift(&l, &lc, &t), Err(Error::LiftRequiresFlatTorsionFree(_))));
    assert!(matches!(
        tangent_lift(&l, &Connection::zero(4), &t),
        Err(Error::LiftRequiresFlatTorsionFree(_))
    ));
}

#[test]
fn iterated_lift_on_s4() {
    let (l, c, t) = s4_data();
    let chain = iterate_lift(&l, &c, &t, 3).unwrap();
    assert_eq!(chain.iter().map(|s| s.total.dim()).collect::<Vec<_>>(), [8, 16, 32]);
    for (k, stage) in chain.iter().enumerate() {
        let report = verify_lift(stage, k + 1);
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.clifford_order, k + 3);
        assert_eq!(report.clifford_span_dim, 1 << (k + 3));
    }
    assert!(iterated_ad_matrix_check(&chain).unwrap());
    assert_eq!(chain[0], tangent_lift(&l, &c, &t).unwrap());
}

#[test]
fn iterated_lift_on_hyperbolic_family() {
    let spec = hyperbolic_family_spec(1).unwrap();
    let (l, c, t) = with_obata(&spec);
    assert_eq!(l.dim(), 12);
    let chain = iterate_lift(&l, &c, &t, 2).unwrap();
    let top = &chain[1];
    assert_eq!(top.total.dim(), 48);
    assert_eq!(top.structures.order(), 4);
    assert!(top.structures.verify().passed);
    assert!(jacobi_check(&top.total).is_empty());
    assert!(iterated_ad_matrix_check(&chain).unwrap());
    // μ = 0 and tr A = 0.
    assert!(chain.iter().all(|s| unimodular(&s.total)));
}

#[test]
fn desk_scale_guard() {
    let spec = hyperbolic_family_spec(1).unwrap();
    let (l, c, t) = with_obata(&spec);
    match iterate_lift(&l, &c, &t, 5) {
        Err(Error::DeskScaleExceeded { dim, .. }) => assert_eq!(dim, 384),
        other => panic!("expected the cap, got {:?}", other.map(|c| c.len())),
    }
    assert!(iterate_lift(&l, &c, &t, 100).is_err());
}

#[test]
fn lift_unimodularity_criterion() {
    let mut r = common::rng(77);
    for _ in 0..40 {
        let spec = common::random_spec(&mut r);
        if spec.n > 2 {
            continue;
        }
        let (l, c, t) = with_obata(&spec);
        let lift = tangent_lift(&l, &c, &t).unwrap();
        let a = spec.a_matrix();
        let criterion = (&spec.mu + &(a.trace() * int(2))).is_zero();
        assert_eq!(unimodular(&lift.total), criterion);
    }
}

#[test]
fn tangent_bundle_examples() {
    let (tg, _) = tangent_bundle_algebra(&LieAlgebra::abelian(4), None).unwrap();
    assert!(tg.is_abelian());

    let (g3, t3) = family_algebra(&FamilyTag::G3).unwrap();
    let (tg3, lifted) = tangent_bundle_algebra(&g3, Some(&t3)).unwrap();
    assert!(jacobi_check(&tg3).is_empty());
    assert!(nilpotency_data(&tg3).nilpotent);
    assert!(verify_hypercomplex(&tg3, &lifted.unwrap()).passed());

    let (ts4, _) = tangent_bundle_algebra(&s4(), None).unwrap();
    let (a1, a2) = tangent_bundle_actions(&ts4).unwrap();
    let i3 = RatMat::identity(3);
    assert_eq!(a1, RatMat::block_diag(&[&i3, &i3]));
    let mut lower = RatMat::zeros(6, 6);
    lower.set_block(3, 0, &i3);
    assert_eq!(a2, lower);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn obata_lifts_of_random_specs(seed in 0u64..10_000) {
        let mut r = common::rng(seed);
        let spec = common::random_spec(&mut r);
        prop_assume!(spec.n <= 2);
        let (l, c, t) = with_obata(&spec);
        let lift = tangent_lift(&l, &c, &t).unwrap();
        let report = verify_lift(&lift, 1);
        prop_assert!(report.passed(), "{:?}", report);
        prop_assert!(ad_matrix_check(&lift).unwrap());
        prop_assert!(verify_hypercomplex(&lift.total, &lift.structures.hypercomplex_triple().unwrap()).passed());
    }

    #[test]
    fn tangent_bundle_of_random_specs(seed in 0u64..10_000) {
        let mut r = common::rng(seed);
        let spec = common::random_spec(&mut r);
        prop_assume!(spec.n <= 2);
        let (l, t) = build_hypercomplex_aa(&spec).unwrap();
        let (tg, lifted) = tangent_bundle_algebra(&l, Some(&t)).unwrap();
        prop_assert!(jacobi_check(&tg).is_empty());
        prop_assert!(verify_hypercomplex(&tg, &lifted.unwrap()).passed());
        prop_assert_eq!(unimodular(&tg), unimodular(&l));
        let a = spec.a_matrix();
        let d = a.rows();
        let (a1, a2) = tangent_bundle_actions(&tg).unwrap();
        prop_assert_eq!(a1, RatMat::block_diag(&[&a, &a]));
        let mut lower = RatMat::zeros(2 * d, 2 * d);
        lower.set_block(d, 0, &a);
        prop_assert_eq!(a2, lower);
    }
}
