mod common;

use std::time::Instant;

use hcaa::cohomology::*;
use hcaa::exact::{int, rat, Rat, RatMat};
use hcaa::liealg::{build_hypercomplex_aa, hyperbolic_family_spec, AlmostAbelianSpec, LieAlgebra};
use num_traits::Zero;

fn g3() -> LieAlgebra {
    let mut s = AlmostAbelianSpec::scalar(2, int(0));
    s.v0[0] = int(1);
    build_hypercomplex_aa(&s).unwrap().0
}

fn g5() -> LieAlgebra {
    let mut s = AlmostAbelianSpec::scalar(2, int(0));
    s.y = RatMat::from_i64(&[&[1]]);
    build_hypercomplex_aa(&s).unwrap().0
}

#[test]
fn g3_betti() {
    let t = Instant::now();
    let b = betti(&g3()).unwrap();
    assert_eq!(b.0, vec![1, 5, 16, 30, 36, 30, 16, 5, 1]);
    assert!(t.elapsed().as_secs() < 5);
    assert!(!wakakuwa_check(&b));
}

#[test]
fn g3_differential_pattern() {
    // [e0, e_a] = f_a (a = 1, 2, 3 ↦ indices 5, 6, 7): d f^a = -e^0 ∧ e^a.
    let l = g3();
    let one = ExteriorBasis::new(8, 1).unwrap();
    let two = ExteriorBasis::new(8, 2).unwrap();
    for a in 1..4 {
        let mut f = vec![Rat::zero(); one.len()];
        f[4 + a] = int(1);
        let df = d_form(&l, 1, &f).unwrap();
        let pos = two.position(&[0, a]).unwrap();
        for (i, v) in df.iter().enumerate() {
            assert_eq!(v, &if i == pos { int(-1) } else { int(0) });
        }
    }
}

#[test]
fn d_squared_vanishes() {
    let mut r = common::rng(3);
    let algebras = vec![g3(), g5(), hcaa::liealg::s4()]
        .into_iter()
        .chain((0..4).map(|_| build_hypercomplex_aa(&common::random_spec(&mut r)).unwrap().0));
    for l in algebras {
        let n = l.dim();
        for k in 0..n.min(6) {
            let d0 = ce_differential(&l, k).unwrap();
            let d1 = ce_differential(&l, k + 1).unwrap();
            assert!(d1.matmul(&d0).is_zero(), "dim {n} degree {k}");
        }
    }
}

#[test]
fn degree_one_is_minus_bracket() {
    let mut r = common::rng(5);
    for _ in 0..5 {
        let l = build_hypercomplex_aa(&common::random_spec(&mut r)).unwrap().0;
        let n = l.dim();
        let two = ExteriorBasis::new(n, 2).unwrap();
        for m in 0..n {
            let mut a = vec![Rat::zero(); n];
            a[m] = int(1);
            let da = d_form(&l, 1, &a).unwrap();
            for s in 0..two.len() {
                let ij = two.indices(s);
                assert_eq!(da[s], -l.constant(ij[0], ij[1], m));
            }
        }
    }
}

#[test]
fn out_of_range_degree() {
    assert!(ce_differential(&LieAlgebra::abelian(3), 4).is_err());
}

#[test]
fn abelian_and_duality() {
    let b = betti(&LieAlgebra::abelian(8)).unwrap();
    assert_eq!(b.0, (0..=8).map(|k| binomial(8, k)).collect::<Vec<_>>());
    assert!(salamon_check(&b, 2).unwrap());
    let mut bad = b.clone();
    bad.0[4] += 1;
    assert!(!salamon_check(&bad, 2).unwrap());
    for l in [g3(), g5()] {
        let b = betti(&l).unwrap();
        assert!(b.poincare_dual());
        assert!(b.0[1] >= 1);
        assert_eq!(b.euler_characteristic(), 0);
    }
}

#[test]
fn s4_is_not_poincare_dual() {
    let b = betti(&hcaa::liealg::s4()).unwrap();
    assert_eq!(b.0, vec![1, 1, 0, 0, 0]);
    assert!(!b.poincare_dual());
}

#[test]
fn closed_form_relations() {
    for n in 1..=4u64 {
        let b = betti_closed_form(n).unwrap();
        assert_eq!(b.0.len() as u64, 8 * n + 5);
        assert!(wakakuwa_check(&b));
        assert!(salamon_check(&b, (2 * n + 1) as usize).unwrap());
        assert_eq!(b.euler_characteristic(), 0);
        assert!(b.poincare_dual());
    }
    let b = betti_closed_form(1).unwrap();
    assert_eq!(&b.0[..4], &[1, 4, 22, 68]);
}

#[test]
fn hyperbolic_family_oracle() {
    let spec = hyperbolic_family_spec(1).unwrap();
    let (l, _) = build_hypercomplex_aa(&spec).unwrap();
    assert_eq!(l.dim(), 12);
    let b = betti(&l).unwrap();
    assert_eq!(b, betti_closed_form(1).unwrap());
}

#[test]
fn rescaled_algebra_same_betti() {
    // Scaling A changes nothing in cohomology.
    let mut s = AlmostAbelianSpec::scalar(2, int(0));
    s.v0[0] = rat(3, 2);
    let (l, _) = build_hypercomplex_aa(&s).unwrap();
    assert_eq!(betti(&l).unwrap(), betti(&g3()).unwrap());
}
