//! Left-invariant connections: Obata, Levi-Civita and Bismut, with
//! torsion, curvature, Ricci and the HKT / hyper-Kähler predicates.
//!
//! Curvature is `R(x, y) = [∇_x, ∇_y] - ∇_[x,y]`. The Ricci tensor is
//! `Ric(x, y) = tr(z ↦ R(z, x) y)` and the Ricci operator `r` is defined by
//! `Ric(x, y) = g(r x, y)`. With these choices the Bismut connection of the
//! HKT almost abelian family has `r = diag(-3μ², -5μ², -5μ², -5μ²) ⊕ 0`;
//! tracing the other slot flips every sign at once.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::cohomology::{d_form, ExteriorBasis};
use crate::error::{Error, Result};
use crate::exact::canonical::is_nilpotent;
use crate::exact::matrix::{dot, RatMat};
use crate::exact::rat::{rat, Rat};
use crate::hypercomplex::{verify_hypercomplex, HypercomplexTriple};
use crate::liealg::{build_hypercomplex_aa, AlmostAbelianSpec, LieAlgebra};

/// A positive definite inner product on the algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metric {
    gram: RatMat,
}

impl Metric {
    pub fn new(gram: RatMat) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::InvalidMetric("Gram matrix is not symmetric".into()));
        }
        for k in 1..=gram.rows() {
            if !gram.block(0, 0, k, k).determinant()?.is_positive() {
                return Err(Error::InvalidMetric(format!("leading minor {k} is not positive")));
            }
        }
        Ok(Metric { gram })
    }

    pub fn standard(dim: usize) -> Self {
        Metric {
            gram: RatMat::identity(dim),
        }
    }

    pub fn gram(&self) -> &RatMat {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn inner(&self, x: &[Rat], y: &[Rat]) -> Rat {
        dot(x, &self.gram.mul_vec(y))
    }

    /// `g(Jx, Jy) = g(x, y)`.
    pub fn is_hermitian(&self, j: &RatMat) -> bool {
        j.transpose().matmul(&self.gram).matmul(j) == self.gram
    }
}

/// `∇_{e_i} e_j = sum_k Γ^k_{ij} e_k`; `ops[i]` is the matrix of `∇_{e_i}`
/// (column `j` holds `∇_{e_i} e_j`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    ops: Vec<RatMat>,
}

impl Connection {
    pub fn zero(dim: usize) -> Self {
        Connection {
            ops: vec![RatMat::zeros(dim, dim); dim],
        }
    }

    pub fn from_ops(ops: Vec<RatMat>) -> Result<Self> {
        let n = ops.len();
        if ops.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::InvalidInput("connection operators have the wrong size".into()));
        }
        Ok(Connection { ops })
    }

    pub fn dim(&self) -> usize {
        self.ops.len()
    }

    pub fn op_basis(&self, i: usize) -> &RatMat {
        &self.ops[i]
    }

    pub fn ops(&self) -> &[RatMat] {
        &self.ops
    }

    /// `Γ^k_{ij}`.
    pub fn gamma(&self, i: usize, j: usize, k: usize) -> Rat {
        self.ops[i][(k, j)].clone()
    }

    /// The matrix of `∇_x`.
    pub fn op(&self, x: &[Rat]) -> RatMat {
        let n = self.dim();
        let mut m = RatMat::zeros(n, n);
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                m = &m + &self.ops[i].scale(c);
            }
        }
        m
    }

    pub fn apply(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        self.op(x).mul_vec(y)
    }

    pub fn is_zero(&self) -> bool {
        self.ops.iter().all(RatMat::is_zero)
    }
}

/// `T(e_i, e_j) = ∇_{e_i} e_j - ∇_{e_j} e_i - [e_i, e_j]` for `i < j`.
pub fn torsion(c: &Connection, l: &LieAlgebra) -> Vec<((usize, usize), Vec<Rat>)> {
    let n = c.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let a = c.ops[i].column(j);
            let b = c.ops[j].column(i);
            let mut t: Vec<Rat> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
            for (k, v) in l.basis_bracket(i, j) {
                t[*k] -= v;
            }
            out.push(((i, j), t));
        }
    }
    out
}

pub fn torsion_free(c: &Connection, l: &LieAlgebra) -> bool {
    torsion(c, l).iter().all(|(_, t)| t.iter().all(Zero::is_zero))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureReport {
    dim: usize,
    // r[i * dim + j] = R(e_i, e_j)
    r: Vec<RatMat>,
    pub flat: bool,
}

impl CurvatureReport {
    pub fn r(&self, i: usize, j: usize) -> &RatMat {
        &self.r[i * self.dim + j]
    }

    /// `Ric(e_i, e_j) = tr(z ↦ R(z, e_i) e_j)`.
    pub fn ricci_tensor(&self) -> RatMat {
        let n = self.dim;
        RatMat::from_fn(n, n, |i, j| (0..n).map(|k| self.r(k, i)[(k, j)].clone()).sum())
    }
}

pub fn curvature(c: &Connection, l: &LieAlgebra) -> CurvatureReport {
    let n = c.dim();
    let mut r = vec![RatMat::zeros(n, n); n * n];
    let mut flat = true;
    for i in 0..n {
        for j in i + 1..n {
            let mut m = c.ops[i].commutator(&c.ops[j]);
            for (k, v) in l.basis_bracket(i, j) {
                m = &m - &c.ops[*k].scale(v);
            }
            flat &= m.is_zero();
            r[j * n + i] = -&m;
            r[i * n + j] = m;
        }
    }
    CurvatureReport { dim: n, r, flat }
}

/// `∇M = 0` for the induced derivation on endomorphisms.
pub fn is_parallel(c: &Connection, m: &RatMat) -> bool {
    c.ops.iter().all(|op| op.commutator(m).is_zero())
}

/// `∇g = 0`.
pub fn is_metric(c: &Connection, g: &Metric) -> bool {
    let gm = g.gram();
    c.ops
        .iter()
        .all(|op| (&op.transpose().matmul(gm) + &gm.matmul(op)).is_zero())
}

fn half() -> Rat {
    rat(1, 2)
}

/// `∇_X Y = ½([X,Y] + J_a[J_a X,Y] - J_b[X,J_b Y] + J_c[J_a X,J_b Y])` for
/// the cyclic order `(a, b, c)` starting at `first` (0, 1 or 2).
pub fn obata_formula(l: &LieAlgebra, t: &HypercomplexTriple, first: usize) -> Connection {
    let n = l.dim();
    let (ja, jb, jc) = (&t.j[first % 3], &t.j[(first + 1) % 3], &t.j[(first + 2) % 3]);
    let e = crate::liealg::standard_basis(n);
    let jae: Vec<Vec<Rat>> = e.iter().map(|x| ja.mul_vec(x)).collect();
    let jbe: Vec<Vec<Rat>> = e.iter().map(|x| jb.mul_vec(x)).collect();
    let ops = (0..n)
        .map(|i| {
            let cols: Vec<Vec<Rat>> = (0..n)
                .map(|j| {
                    let t1 = l.bracket(&e[i], &e[j]);
                    let t2 = ja.mul_vec(&l.bracket(&jae[i], &e[j]));
                    let t3 = jb.mul_vec(&l.bracket(&e[i], &jbe[j]));
                    let t4 = jc.mul_vec(&l.bracket(&jae[i], &jbe[j]));
                    (0..n)
                        .map(|k| (&t1[k] + &t2[k] - &t3[k] + &t4[k]) * half())
                        .collect()
                })
                .collect();
            RatMat::from_columns(n, &cols)
        })
        .collect();
    Connection { ops }
}

/// The Obata connection of an integrable triple.
pub fn obata(l: &LieAlgebra, t: &HypercomplexTriple) -> Result<Connection> {
    let r = verify_hypercomplex(l, t);
    if !r.passed() {
        return Err(Error::NotHypercomplex(r.failures.join("; ")));
    }
    Ok(obata_formula(l, t, 0))
}

/// Levi-Civita connection via the Koszul formula for left-invariant
/// fields: `2g(∇_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y)`.
pub fn levi_civita(l: &LieAlgebra, g: &Metric) -> Result<Connection> {
    let n = l.dim();
    if g.dim() != n {
        return Err(Error::InvalidMetric("metric dimension mismatch".into()));
    }
    Metric::new(g.gram().clone())?;
    let ginv = g.gram().inverse().expect("positive definite");
    let e = crate::liealg::standard_basis(n);
    let lowered = |i: usize, j: usize, k: usize| -> Rat {
        let a = g.inner(&l.bracket(&e[i], &e[j]), &e[k]);
        let b = g.inner(&l.bracket(&e[j], &e[k]), &e[i]);
        let c = g.inner(&l.bracket(&e[k], &e[i]), &e[j]);
        (a - b + c) * half()
    };
    let ops = (0..n)
        .map(|i| {
            let low = RatMat::from_fn(n, n, |k, j| lowered(i, j, k));
            ginv.matmul(&low)
        })
        .collect();
    Ok(Connection { ops })
}

/// A 3-form stored densely, `c(e_i, e_j, e_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeForm {
    dim: usize,
    comps: Vec<Rat>,
}

impl ThreeForm {
    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rat {
        &self.comps[(i * self.dim + j) * self.dim + k]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| {
                    let v = self.get(i, j, k);
                    *v == -self.get(j, i, k).clone() && *v == -self.get(i, k, j).clone()
                })
            })
        })
    }

    /// Coefficients on the lexicographic basis `e^{ijk}`, `i < j < k`.
    pub fn lex_coeffs(&self) -> Vec<Rat> {
        let b = ExteriorBasis::new(self.dim, 3).expect("dimension within range");
        (0..b.len())
            .map(|s| {
                let idx = b.indices(s);
                self.get(idx[0], idx[1], idx[2]).clone()
            })
            .collect()
    }

    /// Nonzero components with `i < j < k`.
    pub fn nonzero(&self) -> Vec<((usize, usize, usize), Rat)> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let v = self.get(i, j, k);
                    if !v.is_zero() {
                        out.push(((i, j, k), v.clone()));
                    }
                }
            }
        }
        out
    }
}

/// `ω(x, y) = g(Jx, y)`.
pub fn kahler_form(j: &RatMat, g: &Metric) -> RatMat {
    j.transpose().matmul(g.gram())
}

/// `dω(x,y,z) = -ω([x,y],z) - ω([y,z],x) - ω([z,x],y)` evaluated directly.
fn d_two_form(l: &LieAlgebra, omega: &RatMat, x: &[Rat], y: &[Rat], z: &[Rat]) -> Rat {
    let w = |a: &[Rat], b: &[Rat]| dot(a, &omega.mul_vec(b));
    -(w(&l.bracket(x, y), z) + w(&l.bracket(y, z), x) + w(&l.bracket(z, x), y))
}

/// The Bismut connection of a Hermitian pair, with its torsion 3-form
/// `c(x, y, z) = dω(Jx, Jy, Jz)`, assembled as
/// `g(∇ᵇ_x y, z) = g(∇ᵍ_x y, z) + ½ c(x, y, z)`.
pub fn bismut(l: &LieAlgebra, j: &RatMat, g: &Metric) -> Result<(Connection, ThreeForm)> {
    let n = l.dim();
    if j.rows() != n || g.dim() != n {
        return Err(Error::InvalidInput("dimension mismatch".into()));
    }
    if !g.is_hermitian(j) {
        return Err(Error::NotHermitian);
    }
    let lc = levi_civita(l, g)?;
    let omega = kahler_form(j, g);
    let je: Vec<Vec<Rat>> = (0..n).map(|i| j.column(i)).collect();
    let mut comps = vec![Rat::zero(); n * n * n];
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let v = d_two_form(l, &omega, &je[a], &je[b], &je[c]);
                if v.is_zero() {
                    continue;
                }
                for (p, q, r, s) in [
                    (a, b, c, 1),
                    (b, c, a, 1),
                    (c, a, b, 1),
                    (b, a, c, -1),
                    (a, c, b, -1),
                    (c, b, a, -1),
                ] {
                    comps[(p * n + q) * n + r] = if s > 0 { v.clone() } else { -v.clone() };
                }
            }
        }
    }
    let form = ThreeForm { dim: n, comps };
    let ginv = g.gram().inverse().expect("positive definite");
    let ops = (0..n)
        .map(|x| {
            // Lowered correction: entry (z, y) = ½ c(x, y, z).
            let corr = RatMat::from_fn(n, n, |z, y| form.get(x, y, z) * half());
            &lc.ops[x] + &ginv.matmul(&corr)
        })
        .collect();
    Ok((Connection { ops }, form))
}

/// `d` of a 3-form, as lexicographic coefficients over `e^{ijkl}`.
pub fn d_three_form(l: &LieAlgebra, c: &ThreeForm) -> Result<Vec<Rat>> {
    d_form(l, 3, &c.lex_coeffs())
}

/// Strong HKT / pluriclosed: `dc = 0`.
pub fn strong_hkt(l: &LieAlgebra, c: &ThreeForm) -> Result<bool> {
    Ok(d_three_form(l, c)?.iter().all(Zero::is_zero))
}

fn require_hyperhermitian(t: &HypercomplexTriple, g: &Metric) -> Result<()> {
    for (a, j) in t.j.iter().enumerate() {
        if !g.is_hermitian(j) {
            return Err(Error::NotHyperhermitian(format!("J{} is not g-orthogonal", a + 1)));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HktViolation {
    pub triple: (usize, usize, usize),
    pub s: [String; 3],
}

/// `S_a(x,y,z) = g([J_a x, J_a y], z) + g([J_a y, J_a z], x) + g([J_a z, J_a x], y)`.
pub fn hkt_s(l: &LieAlgebra, j: &RatMat, g: &Metric, x: &[Rat], y: &[Rat], z: &[Rat]) -> Rat {
    let (jx, jy, jz) = (j.mul_vec(x), j.mul_vec(y), j.mul_vec(z));
    g.inner(&l.bracket(&jx, &jy), z) + g.inner(&l.bracket(&jy, &jz), x) + g.inner(&l.bracket(&jz, &jx), y)
}

/// `Ok(None)` when `S_1 = S_2 = S_3` on all basis triples, otherwise the
/// first violating triple.
pub fn hkt_check(l: &LieAlgebra, t: &HypercomplexTriple, g: &Metric) -> Result<Option<HktViolation>> {
    require_hyperhermitian(t, g)?;
    let n = l.dim();
    let e = crate::liealg::standard_basis(n);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let s: Vec<Rat> = t.j.iter().map(|ja| hkt_s(l, ja, g, &e[i], &e[j], &e[k])).collect();
                if s[0] != s[1] || s[1] != s[2] {
                    return Ok(Some(HktViolation {
                        triple: (i, j, k),
                        s: [s[0].to_string(), s[1].to_string(), s[2].to_string()],
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// All three Kähler forms closed.
pub fn hyperkahler_check(l: &LieAlgebra, t: &HypercomplexTriple, g: &Metric) -> Result<bool> {
    require_hyperhermitian(t, g)?;
    let n = l.dim();
    let two = ExteriorBasis::new(n, 2)?;
    for j in &t.j {
        let omega = kahler_form(j, g);
        let coeffs: Vec<Rat> = (0..two.len())
            .map(|s| {
                let idx = two.indices(s);
                omega[(idx[0], idx[1])].clone()
            })
            .collect();
        if d_form(l, 2, &coeffs)?.iter().any(|c| !c.is_zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Ricci operator `r` with `Ric(x, y) = g(r x, y)`.
pub fn ricci_operator(c: &Connection, g: &Metric, l: &LieAlgebra) -> RatMat {
    let ric = curvature(c, l).ricci_tensor();
    let ginv = g.gram().inverse().expect("positive definite");
    ginv.matmul(&ric.transpose())
}

/// Right multiplications `ρ(e_i) y = ∇_y e_i` of the left-symmetric
/// product `x·y = ∇_x y`.
pub fn right_multiplications(c: &Connection) -> Vec<RatMat> {
    let n = c.dim();
    (0..n)
        .map(|i| RatMat::from_fn(n, n, |k, j| c.gamma(j, i, k)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompletenessReport {
    /// `tr ρ(x) = 0` for all `x`.
    pub trace_free: bool,
    /// Each basis right multiplication is nilpotent.
    pub basis_nilpotent: bool,
    pub complete: bool,
}

/// Completeness of a flat torsion-free connection through its
/// left-symmetric algebra: complete exactly when all right multiplications
/// are trace free (equivalently nilpotent).
pub fn lsa_completeness(c: &Connection) -> CompletenessReport {
    let rho = right_multiplications(c);
    let trace_free = rho.iter().all(|r| r.trace().is_zero());
    let basis_nilpotent = rho.iter().all(is_nilpotent);
    CompletenessReport {
        trace_free,
        basis_nilpotent,
        complete: trace_free && basis_nilpotent,
    }
}

pub fn geodesically_complete_obata(spec: &AlmostAbelianSpec) -> Result<CompletenessReport> {
    let (l, t) = build_hypercomplex_aa(spec)?;
    let c = obata(&l, &t)?;
    Ok(lsa_completeness(&c))
}

/// The metric making the basis of an `AlmostAbelianSpec` orthonormal.
pub fn standard_metric(spec: &AlmostAbelianSpec) -> Metric {
    Metric::standard(spec.dim())
}
