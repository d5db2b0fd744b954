//! Tangent algebras of flat torsion-free connections and the Clifford
//! structures they carry.
//!
//! For a flat torsion-free `∇` on `g`, `T_∇ g = g ⋉_∇ g` has bracket
//! `[(x, v), (y, w)] = ([x, y], ∇_x w - ∇_y v)`. The basis is
//! `(e_0, 0), ..., (e_{d-1}, 0), (0, e_0), ..., (0, e_{d-1})`. Every
//! parallel complex structure `J` lifts to `J⁻ = J ⊕ (-J)` and the swap
//! `K(x, v) = (v, -x)` is one more, so each lift adds one generator to a
//! Clifford system. The connection lifts to `∇¹_{(x,v)} = ∇_x ⊕ ∇_x`.
//!
//! The tangent bundle algebra `T g = g ⋉_ad g` is built here as well.

use num_traits::Zero;
use serde::Serialize;

use crate::connections::{curvature, is_parallel, torsion_free, Connection};
use crate::error::{Error, Result};
use crate::exact::matrix::RatMat;
use crate::exact::Rat;
use crate::hypercomplex::{canonical_triple, clifford_verify, CliffordReport, HypercomplexTriple};
use crate::liealg::{almost_abelian_action, LieAlgebra};

pub const DEFAULT_DIM_CAP: usize = 256;

/// Cap on the dimension of lifted algebras; `HCAA_DIM_CAP` overrides it.
pub fn dim_cap() -> usize {
    std::env::var("HCAA_DIM_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_DIM_CAP)
}

/// Pairwise anticommuting complex structures with names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordSystem {
    pub gens: Vec<RatMat>,
    pub labels: Vec<String>,
}

impl CliffordSystem {
    pub fn order(&self) -> usize {
        self.gens.len()
    }

    pub fn verify(&self) -> CliffordReport {
        clifford_verify(&self.gens)
    }

    /// `(G1, G2, G1 G2)` from the first two generators.
    pub fn hypercomplex_triple(&self) -> Option<HypercomplexTriple> {
        let [a, b, ..] = self.gens.as_slice() else {
            return None;
        };
        Some(HypercomplexTriple::new(a.clone(), b.clone(), a.matmul(b)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedAlgebra {
    pub base: LieAlgebra,
    pub connection: Connection,
    pub total: LieAlgebra,
    /// `∇¹` on `total`.
    pub lifted_connection: Connection,
    pub structures: CliffordSystem,
}

fn require_flat_torsion_free(l: &LieAlgebra, c: &Connection, gens: &[RatMat]) -> Result<()> {
    if c.dim() != l.dim() {
        return Err(Error::InvalidInput("connection and algebra dimensions differ".into()));
    }
    if !torsion_free(c, l) {
        return Err(Error::LiftRequiresFlatTorsionFree("connection has torsion".into()));
    }
    if !curvature(c, l).flat {
        return Err(Error::LiftRequiresFlatTorsionFree("connection is not flat".into()));
    }
    if let Some(a) = gens.iter().position(|j| !is_parallel(c, j)) {
        return Err(Error::LiftRequiresFlatTorsionFree(format!("structure {a} is not parallel")));
    }
    Ok(())
}

fn minus_lift(j: &RatMat) -> RatMat {
    RatMat::block_diag(&[j, &-j])
}

fn swap_k(d: usize) -> RatMat {
    let mut k = RatMat::zeros(2 * d, 2 * d);
    // K(x, v) = (v, -x)
    k.set_block(0, d, &RatMat::identity(d));
    k.set_block(d, 0, &-RatMat::identity(d));
    k
}

fn lift_once(l: &LieAlgebra, c: &Connection, structures: &CliffordSystem, stage: usize) -> Result<LiftedAlgebra> {
    require_flat_torsion_free(l, c, &structures.gens)?;
    let d = l.dim();
    if 2 * d > dim_cap() {
        return Err(Error::DeskScaleExceeded { dim: 2 * d, cap: dim_cap() });
    }
    let total = LieAlgebra::from_bracket_fn(2 * d, |i, j| {
        let mut out = vec![Rat::zero(); 2 * d];
        match (i < d, j < d) {
            (true, true) => {
                for (k, v) in l.basis_bracket(i, j) {
                    out[*k] = v.clone();
                }
            }
            // i < j, so only (base, fiber) remains besides (fiber, fiber) = 0.
            (true, false) => {
                let col = c.op_basis(i).column(j - d);
                out[d..].clone_from_slice(&col);
            }
            _ => {}
        }
        out
    });
    let zero = RatMat::zeros(2 * d, 2 * d);
    let ops = (0..2 * d)
        .map(|i| {
            if i < d {
                RatMat::block_diag(&[c.op_basis(i), c.op_basis(i)])
            } else {
                zero.clone()
            }
        })
        .collect();
    let mut gens: Vec<RatMat> = structures.gens.iter().map(minus_lift).collect();
    gens.push(swap_k(d));
    let mut labels: Vec<String> = structures.labels.iter().map(|s| format!("{s}-")).collect();
    labels.push(format!("K{stage}"));
    Ok(LiftedAlgebra {
        base: l.clone(),
        connection: c.clone(),
        total,
        lifted_connection: Connection::from_ops(ops)?,
        structures: CliffordSystem { gens, labels },
    })
}

/// `T_∇ g` with `(J1⁻, J2⁻, K)`.
pub fn tangent_lift(l: &LieAlgebra, c: &Connection, t: &HypercomplexTriple) -> Result<LiftedAlgebra> {
    if t.dim() != l.dim() {
        return Err(Error::InvalidInput("triple and algebra dimensions differ".into()));
    }
    require_flat_torsion_free(l, c, &t.j)?;
    let base = CliffordSystem {
        gens: vec![t.j[0].clone(), t.j[1].clone()],
        labels: vec!["J1".into(), "J2".into()],
    };
    lift_once(l, c, &base, 1)
}

/// `T^1, ..., T^levels`, each the tangent algebra of the previous one with
/// its lifted connection. Stage `l` carries `l + 2` generators.
pub fn iterate_lift(l: &LieAlgebra, c: &Connection, t: &HypercomplexTriple, levels: usize) -> Result<Vec<LiftedAlgebra>> {
    if levels == 0 {
        return Err(Error::InvalidInput("at least one lift is required".into()));
    }
    let target = l.dim().checked_shl(levels as u32).unwrap_or(usize::MAX);
    if levels >= usize::BITS as usize || target > dim_cap() {
        return Err(Error::DeskScaleExceeded {
            dim: if levels >= usize::BITS as usize { usize::MAX } else { target },
            cap: dim_cap(),
        });
    }
    let mut chain = vec![tangent_lift(l, c, t)?];
    for stage in 2..=levels {
        let prev = chain.last().expect("nonempty");
        let next = lift_once(&prev.total, &prev.lifted_connection, &prev.structures, stage)?;
        chain.push(next);
    }
    Ok(chain)
}

/// `Ã = [[μ, 0], [v0, A]]`, read off from `A = ad_{e0}` with the canonical
/// triple: `μ` is the scalar on `q` and `v0 = -J1 v1`.
pub fn a_tilde(a: &RatMat) -> Result<RatMat> {
    let d = a.rows();
    if d < 3 || (d + 1) % 4 != 0 {
        return Err(Error::InvalidInput(format!("action of size {d} is not of hypercomplex shape")));
    }
    let n = (d + 1) / 4;
    let mu = a[(0, 0)].clone();
    let v1: Vec<Rat> = (3..d).map(|i| a[(i, 0)].clone()).collect();
    let j1h = canonical_triple(n).restrict_h()[0].clone();
    let v0: Vec<Rat> = j1h.mul_vec(&v1).into_iter().map(|x| -x).collect();
    let mut out = RatMat::zeros(d + 1, d + 1);
    out[(0, 0)] = mu;
    for (i, x) in v0.into_iter().enumerate() {
        out[(4 + i, 0)] = x;
    }
    out.set_block(1, 1, a);
    Ok(out)
}

/// `ad_{(e0, 0)}` on the lift equals `0 ⊕ A ⊕ Ã`.
pub fn ad_matrix_check(lift: &LiftedAlgebra) -> Result<bool> {
    let a = almost_abelian_action(&lift.base)?;
    let expected = RatMat::block_diag(&[&RatMat::zeros(1, 1), &a, &a_tilde(&a)?]);
    Ok(lift.total.ad_basis(0) == expected)
}

/// The same identity at any stage: `0 ⊕ A` followed by `2^l - 1` copies
/// of `Ã`, where `A` belongs to the bottom of the chain.
pub fn iterated_ad_matrix_check(chain: &[LiftedAlgebra]) -> Result<bool> {
    let Some(first) = chain.first() else {
        return Err(Error::InvalidInput("empty chain".into()));
    };
    let a = almost_abelian_action(&first.base)?;
    let at = a_tilde(&a)?;
    let zero = RatMat::zeros(1, 1);
    for (k, stage) in chain.iter().enumerate() {
        let copies = (1usize << (k + 1)) - 1;
        let mut blocks: Vec<&RatMat> = vec![&zero, &a];
        blocks.extend(std::iter::repeat(&at).take(copies));
        if stage.total.ad_basis(0) != RatMat::block_diag(&blocks) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftReport {
    pub stage: usize,
    pub dim: usize,
    pub jacobi: bool,
    pub clifford_order: usize,
    pub clifford_span_dim: usize,
    pub clifford_ok: bool,
    pub structures_integrable: bool,
    pub lifted_flat: bool,
    pub lifted_torsion_free: bool,
    pub lifted_parallel: bool,
    pub unimodular: bool,
}

impl LiftReport {
    pub fn passed(&self) -> bool {
        self.jacobi
            && self.clifford_ok
            && self.structures_integrable
            && self.lifted_flat
            && self.lifted_torsion_free
            && self.lifted_parallel
    }
}

/// Full verification of one stage.
pub fn verify_lift(lift: &LiftedAlgebra, stage: usize) -> LiftReport {
    let total = &lift.total;
    let cl = lift.structures.verify();
    let integrable = lift
        .structures
        .gens
        .iter()
        .all(|j| crate::hypercomplex::nijenhuis_violation(total, j).is_none());
    let nabla = &lift.lifted_connection;
    LiftReport {
        stage,
        dim: total.dim(),
        jacobi: crate::liealg::jacobi_check(total).is_empty(),
        clifford_order: cl.order,
        clifford_span_dim: cl.span_dim,
        clifford_ok: cl.passed,
        structures_integrable: integrable,
        lifted_flat: curvature(nabla, total).flat,
        lifted_torsion_free: torsion_free(nabla, total),
        lifted_parallel: lift.structures.gens.iter().all(|j| is_parallel(nabla, j)),
        unimodular: crate::liealg::unimodular(total),
    }
}

/// `T g = g ⋉_ad g`, with `[(x, v), (y, w)] = ([x, y], [x, w] - [y, v])`,
/// and `J⁺ = J ⊕ J` when a triple is given.
pub fn tangent_bundle_algebra(
    l: &LieAlgebra,
    t: Option<&HypercomplexTriple>,
) -> Result<(LieAlgebra, Option<HypercomplexTriple>)> {
    let d = l.dim();
    if 2 * d > dim_cap() {
        return Err(Error::DeskScaleExceeded { dim: 2 * d, cap: dim_cap() });
    }
    let total = LieAlgebra::from_bracket_fn(2 * d, |i, j| {
        let mut out = vec![Rat::zero(); 2 * d];
        let shift = match (i < d, j < d) {
            (true, true) => Some((i, j, 0)),
            (true, false) => Some((i, j - d, d)),
            _ => None,
        };
        if let Some((a, b, off)) = shift {
            for (k, v) in l.basis_bracket(a, b) {
                out[off + *k] = v.clone();
            }
        }
        out
    });
    let lifted = match t {
        Some(t) => {
            if t.dim() != d {
                return Err(Error::InvalidInput("triple and algebra dimensions differ".into()));
            }
            let p = |j: &RatMat| RatMat::block_diag(&[j, j]);
            Some(HypercomplexTriple::new(p(&t.j[0]), p(&t.j[1]), p(&t.j[2])))
        }
        None => None,
    };
    Ok((total, lifted))
}

/// `A1 = ad_{(e0,0)}` and `A2 = ad_{(0,e0)}` on `R^d ⊕ R^d`, the span of
/// `(e_i, 0)` and `(0, e_i)` for `i ≥ 1`, for `T g` of an almost abelian
/// `g` of dimension `d + 1`.
pub fn tangent_bundle_actions(tg: &LieAlgebra) -> Result<(RatMat, RatMat)> {
    let n = tg.dim();
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidInput("not a tangent bundle algebra".into()));
    }
    let half = n / 2;
    let idx: Vec<usize> = (1..half).chain(half + 1..n).collect();
    let restrict = |m: &RatMat| -> Result<RatMat> {
        // the complement of (e0,0), (0,e0) must be invariant
        for &j in &idx {
            if !m[(0, j)].is_zero() || !m[(half, j)].is_zero() {
                return Err(Error::InvalidInput("R^d ⊕ R^d is not invariant".into()));
            }
        }
        Ok(RatMat::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])].clone()))
    };
    Ok((restrict(&tg.ad_basis(0))?, restrict(&tg.ad_basis(half))?))
}
