//! Complex and hypercomplex structures on Lie algebras: Nijenhuis tensors,
//! quaternion relations, the canonical triple, recovery of the block data
//! `(mu, v, B)` from an algebra, the `v = 0` frame change, and Clifford
//! systems.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::matrix::{is_zero_vec, unit_vec, RatMat};
use crate::exact::rat::Rat;
use crate::exact::sparse::{primitive_row, EchelonBasis};
use crate::liealg::{AlmostAbelianSpec, LieAlgebra};

/// A linear endomorphism `J` with `J^2 = -1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexStructure {
    j: RatMat,
}

impl ComplexStructure {
    pub fn new(j: RatMat) -> Result<Self> {
        if !j.is_square() || !(&j.matmul(&j) + &RatMat::identity(j.rows())).is_zero() {
            return Err(Error::InvalidInput("J^2 != -1".into()));
        }
        Ok(ComplexStructure { j })
    }

    pub fn matrix(&self) -> &RatMat {
        &self.j
    }
}

/// Three endomorphisms meant to satisfy `J1 J2 = -J2 J1 = J3`. The
/// relations are checked by [`verify_hypercomplex`], not on construction,
/// so broken triples can be represented and diagnosed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypercomplexTriple {
    pub j: [RatMat; 3],
}

impl HypercomplexTriple {
    pub fn new(j1: RatMat, j2: RatMat, j3: RatMat) -> Self {
        HypercomplexTriple { j: [j1, j2, j3] }
    }

    pub fn dim(&self) -> usize {
        self.j[0].rows()
    }

    /// Squares, anticommutation and `J1 J2 = J3`; the first failure is
    /// described.
    pub fn quaternion_relations(&self) -> std::result::Result<(), String> {
        let n = self.dim();
        let minus_id = -RatMat::identity(n);
        for (a, j) in self.j.iter().enumerate() {
            if j.rows() != n || j.cols() != n {
                return Err(format!("J{} has the wrong size", a + 1));
            }
            if j.matmul(j) != minus_id {
                return Err(format!("J{}^2 != -1", a + 1));
            }
        }
        let [j1, j2, j3] = &self.j;
        let j12 = j1.matmul(j2);
        if j12 != -j2.matmul(j1) {
            return Err("J1 J2 != -J2 J1".into());
        }
        if &j12 != j3 {
            return Err("J1 J2 != J3".into());
        }
        Ok(())
    }

    /// The lower-right blocks beyond the first four coordinates. For the
    /// canonical triple this is the action on `h`.
    pub fn restrict_h(&self) -> [RatMat; 3] {
        let m = self.dim() - 4;
        self.j.clone().map(|j| j.block(4, 4, m, m))
    }

    /// Conjugates every structure by a change of basis whose columns are
    /// the new basis vectors.
    pub fn in_basis(&self, p: &RatMat) -> Result<Self> {
        let pinv = p
            .inverse()
            .ok_or_else(|| Error::InvalidInput("singular change of basis".into()))?;
        Ok(HypercomplexTriple {
            j: self.j.clone().map(|j| pinv.matmul(&j).matmul(p)),
        })
    }
}

/// `N_J(x, y) = [x,y] + J([Jx,y] + [x,Jy]) - [Jx,Jy]`.
pub fn nijenhuis(l: &LieAlgebra, j: &RatMat, x: &[Rat], y: &[Rat]) -> Result<Vec<Rat>> {
    let n = l.dim();
    if j.rows() != n || j.cols() != n || x.len() != n || y.len() != n {
        return Err(Error::InvalidInput("dimension mismatch in Nijenhuis tensor".into()));
    }
    let jx = j.mul_vec(x);
    let jy = j.mul_vec(y);
    let inner: Vec<Rat> = l
        .bracket(&jx, y)
        .iter()
        .zip(l.bracket(x, &jy))
        .map(|(a, b)| a + b)
        .collect();
    let jin = j.mul_vec(&inner);
    let xy = l.bracket(x, y);
    let jxjy = l.bracket(&jx, &jy);
    Ok((0..n).map(|k| &xy[k] + &jin[k] - &jxjy[k]).collect())
}

/// First basis pair `(i, j)` on which `N_J` does not vanish.
pub fn nijenhuis_violation(l: &LieAlgebra, j: &RatMat) -> Option<(usize, usize)> {
    let n = l.dim();
    if j.rows() != n || j.cols() != n {
        return Some((0, 0));
    }
    for a in 0..n {
        for b in a + 1..n {
            let v = nijenhuis(l, j, &unit_vec(n, a), &unit_vec(n, b)).ok()?;
            if !is_zero_vec(&v) {
                return Some((a, b));
            }
        }
    }
    None
}

pub fn integrable(l: &LieAlgebra, j: &RatMat) -> bool {
    nijenhuis_violation(l, j).is_none()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypercomplexReport {
    pub quaternion_relations: bool,
    pub integrable: [bool; 3],
    pub failures: Vec<String>,
}

impl HypercomplexReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn verify_hypercomplex(l: &LieAlgebra, t: &HypercomplexTriple) -> HypercomplexReport {
    let mut failures = Vec::new();
    let quaternion_relations = match t.quaternion_relations() {
        Ok(()) => true,
        Err(e) => {
            failures.push(e);
            false
        }
    };
    let mut integ = [true; 3];
    for (a, j) in t.j.iter().enumerate() {
        if let Some((p, q)) = nijenhuis_violation(l, j) {
            integ[a] = false;
            failures.push(format!("N_J{} (e{p}, e{q}) != 0", a + 1));
        }
    }
    HypercomplexReport {
        quaternion_relations,
        integrable: integ,
        failures,
    }
}

/// `J_y = y1 J1 + y2 J2 + y3 J3` for a rational unit vector `y`.
pub fn sphere_structure(t: &HypercomplexTriple, y: &[Rat; 3]) -> Result<ComplexStructure> {
    let norm: Rat = y.iter().map(|c| c * c).sum();
    if !norm.is_one() {
        return Err(Error::InvalidInput(format!("|y|^2 = {norm}, expected 1")));
    }
    let n = t.dim();
    let mut j = RatMat::zeros(n, n);
    for (c, ja) in y.iter().zip(&t.j) {
        j = &j + &ja.scale(c);
    }
    ComplexStructure::new(j)
}

/// Quaternionic blocks with `I` of size `k`, in the order
/// `(x, J1 x, J2 x, J3 x)`.
fn quaternion_blocks(k: usize) -> [RatMat; 3] {
    let i = RatMat::identity(k);
    let z = RatMat::zeros(k, k);
    let m = -&i;
    let assemble = |layout: [[&RatMat; 4]; 4]| {
        let mut out = RatMat::zeros(4 * k, 4 * k);
        for (r, row) in layout.iter().enumerate() {
            for (c, b) in row.iter().enumerate() {
                out.set_block(r * k, c * k, b);
            }
        }
        out
    };
    [
        assemble([[&z, &m, &z, &z], [&i, &z, &z, &z], [&z, &z, &z, &m], [&z, &z, &i, &z]]),
        assemble([[&z, &z, &m, &z], [&z, &z, &z, &i], [&i, &z, &z, &z], [&z, &m, &z, &z]]),
        assemble([[&z, &z, &z, &m], [&z, &z, &m, &z], [&z, &i, &z, &z], [&i, &z, &z, &z]]),
    ]
}

/// The standard triple on `q ⊕ h` of quaternionic dimension `n`.
pub fn canonical_triple(n: usize) -> HypercomplexTriple {
    assert!(n >= 1, "quaternionic dimension must be positive");
    let q = quaternion_blocks(1);
    let h = quaternion_blocks(n - 1);
    let [q1, q2, q3] = &q;
    let [h1, h2, h3] = &h;
    HypercomplexTriple::new(
        RatMat::block_diag(&[q1, h1]),
        RatMat::block_diag(&[q2, h2]),
        RatMat::block_diag(&[q3, h3]),
    )
}

/// Block data recovered from an almost abelian algebra with a
/// hypercomplex structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    /// `(e0, e1, e2, e3)` in the input coordinates, `e_alpha = J_alpha e0`.
    pub q_basis: [Vec<Rat>; 4],
    /// Adapted basis `(f.., J1 f.., J2 f.., J3 f..)` of `h`.
    pub h_basis: Vec<Vec<Rat>>,
    pub mu: Rat,
    /// `(v0, v1, v2, v3)` in `h_basis` coordinates, with
    /// `v0 = -J1 v1` and `v_alpha = J_alpha v0`.
    pub v: [Vec<Rat>; 4],
    pub b: RatMat,
    /// Columns are `q_basis` followed by `h_basis`.
    pub frame: RatMat,
    pub spec: AlmostAbelianSpec,
}

/// Recovers `(h, q, mu, v, B)` given the codimension-one abelian ideal `u`.
///
/// `e0` is taken normal to `u` for the hyperhermitian product
/// `G = I + sum J_a^T J_a`, scaled to a primitive integer vector with
/// positive leading entry.
pub fn decompose(
    l: &LieAlgebra,
    t: &HypercomplexTriple,
    u_basis: &[Vec<Rat>],
) -> Result<DecompositionReport> {
    let report = verify_hypercomplex(l, t);
    if !report.passed() {
        return Err(Error::NotHypercomplex(report.failures.join("; ")));
    }
    let dim = l.dim();
    if dim % 4 != 0 || dim == 0 {
        return Err(Error::NotHypercomplex(format!("dimension {dim} is not a multiple of 4")));
    }
    let n = dim / 4;
    if u_basis.len() != dim - 1 || u_basis.iter().any(|u| u.len() != dim) {
        return Err(Error::InvalidInput("u must be given by dim-1 vectors".into()));
    }
    let umat = RatMat::from_columns(dim, u_basis);
    if umat.rank() != dim - 1 {
        return Err(Error::InvalidInput("u basis is not independent".into()));
    }
    for a in u_basis {
        for b in u_basis {
            if !is_zero_vec(&l.bracket(a, b)) {
                return Err(Error::InvalidInput("u is not abelian".into()));
            }
        }
    }

    let mut g = RatMat::identity(dim);
    for j in &t.j {
        g = &g + &j.transpose().matmul(j);
    }
    let normal_rows = umat.transpose().matmul(&g);
    let ker = normal_rows.kernel();
    debug_assert_eq!(ker.len(), 1);
    let e0 = primitive_vector(&ker[0]);
    for x in u_basis {
        let y = l.bracket(&e0, x);
        if umat.solve(&y).is_none() {
            return Err(Error::InvalidInput("u is not an ideal".into()));
        }
    }
    let q_basis = [
        e0.clone(),
        t.j[0].mul_vec(&e0),
        t.j[1].mul_vec(&e0),
        t.j[2].mul_vec(&e0),
    ];

    // h = u ∩ J1 u ∩ J2 u ∩ J3 u: the common kernel of the functionals
    // x -> <n, J_a x> with n the normal covector of u.
    let nrow = g.mul_vec(&e0);
    let mut funcs = vec![nrow.clone()];
    for j in &t.j {
        funcs.push(j.transpose().mul_vec(&nrow));
    }
    let h = RatMat::from_rows(funcs)?.kernel();
    if h.len() != 4 * (n - 1) {
        return Err(Error::Inconsistent(format!(
            "u ∩ J1u ∩ J2u ∩ J3u has dimension {}, expected {}",
            h.len(),
            4 * (n - 1)
        )));
    }
    let h_basis = adapted_basis(t, &h)?;

    let mut cols: Vec<Vec<Rat>> = q_basis.to_vec();
    cols.extend(h_basis.iter().cloned());
    let frame = RatMat::from_columns(dim, &cols);
    let pinv = frame
        .inverse()
        .ok_or_else(|| Error::Inconsistent("q + h does not span the algebra".into()))?;
    let ad = pinv.matmul(&l.ad(&e0)).matmul(&frame);

    let mu = ad[(1, 1)].clone();
    for a in 1..4 {
        for b in 1..4 {
            let want = if a == b { mu.clone() } else { Rat::zero() };
            if ad[(a, b)] != want {
                return Err(Error::Inconsistent(
                    "ad(e0) on span(e1, e2, e3) is not a multiple of the identity modulo h".into(),
                ));
            }
        }
        if (4..dim).any(|c| !ad[(a, c)].is_zero()) {
            return Err(Error::Inconsistent("h is not an ideal".into()));
        }
    }
    let m = dim - 4;
    let b = ad.block(4, 4, m, m);
    let hj = canonical_triple(n).restrict_h();
    for (a, j) in hj.iter().enumerate() {
        if !b.commutator(j).is_zero() {
            return Err(Error::Inconsistent(format!("B does not commute with J{}", a + 1)));
        }
    }
    let v1 = ad.block(4, 1, m, 1).column(0);
    let v2 = ad.block(4, 2, m, 1).column(0);
    let v3 = ad.block(4, 3, m, 1).column(0);
    let v0: Vec<Rat> = hj[0].mul_vec(&v1).into_iter().map(|x| -x).collect();
    if hj[1].mul_vec(&v0) != v2 || hj[2].mul_vec(&v0) != v3 || hj[0].mul_vec(&v0) != v1 {
        return Err(Error::Inconsistent("v_alpha != J_alpha v0".into()));
    }
    let spec = AlmostAbelianSpec::from_b(n, mu.clone(), v0.clone(), &b)?;
    Ok(DecompositionReport {
        q_basis,
        h_basis,
        mu,
        v: [v0, v1, v2, v3],
        b,
        frame,
        spec,
    })
}

fn primitive_vector(v: &[Rat]) -> Vec<Rat> {
    let entries: Vec<(usize, Rat)> = v.iter().cloned().enumerate().collect();
    let row = primitive_row(&entries);
    let mut out = vec![Rat::zero(); v.len()];
    for (k, c) in row {
        out[k] = Rat::from_integer(c);
    }
    if out.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
        out.iter_mut().for_each(|c| *c = -c.clone());
    }
    out
}

/// Greedy quaternionic basis `(f.., J1 f.., J2 f.., J3 f..)` of a
/// `J`-invariant subspace.
fn adapted_basis(t: &HypercomplexTriple, span: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>> {
    let mut fs: Vec<Vec<Rat>> = Vec::new();
    let mut echelon = EchelonBasis::new();
    for cand in span {
        let orbit = [
            cand.clone(),
            t.j[0].mul_vec(cand),
            t.j[1].mul_vec(cand),
            t.j[2].mul_vec(cand),
        ];
        let mut probe = echelon.clone();
        if !probe.insert(primitive_row(&indexed(cand))) {
            continue;
        }
        for o in &orbit {
            if !echelon.insert(primitive_row(&indexed(o))) {
                return Err(Error::Inconsistent("h is not J-invariant".into()));
            }
        }
        fs.push(cand.clone());
    }
    if 4 * fs.len() != span.len() {
        return Err(Error::Inconsistent("h is not J-invariant".into()));
    }
    let mut out = fs.clone();
    for j in &t.j {
        out.extend(fs.iter().map(|f| j.mul_vec(f)));
    }
    Ok(out)
}

fn indexed(v: &[Rat]) -> Vec<(usize, Rat)> {
    v.iter().cloned().enumerate().collect()
}

/// Result of moving to a frame in which `v = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VNormalization {
    pub spec: AlmostAbelianSpec,
    /// Solution of `(B - mu I) x1 = v1` in `h`.
    pub x1: Vec<Rat>,
    /// `(e0', e1', e2', e3')` in the coordinates of the input algebra.
    pub frame: [Vec<Rat>; 4],
}

impl VNormalization {
    /// Change of basis with columns `e0', e1', e2', e3', h`.
    pub fn frame_matrix(&self) -> RatMat {
        let dim = self.spec.dim();
        let mut cols: Vec<Vec<Rat>> = self.frame.to_vec();
        cols.extend((4..dim).map(|i| unit_vec(dim, i)));
        RatMat::from_columns(dim, &cols)
    }
}

/// Removes `v` by the frame change `e0' = e0 + J1 x1`, `e1' = e1 - x1`,
/// `e2' = e2 - J3 x1`, `e3' = e3 + J2 x1`, when `v1` lies in the image of
/// `B - mu I`.
pub fn normalize_v(spec: &AlmostAbelianSpec) -> Option<VNormalization> {
    spec.validate().ok()?;
    let dim = spec.dim();
    let m = dim - 4;
    let b = spec.b_matrix();
    let v1 = &spec.v_alpha()[0];
    let shifted = &b - &RatMat::scalar(m, &spec.mu);
    let x1 = if spec.v_is_zero() {
        vec![Rat::zero(); m]
    } else {
        shifted.solve(v1)?
    };
    let t = canonical_triple(spec.n);
    let mut x = vec![Rat::zero(); dim];
    x[4..].clone_from_slice(&x1);
    let jx: Vec<Vec<Rat>> = t.j.iter().map(|j| j.mul_vec(&x)).collect();
    let add = |a: &[Rat], b: &[Rat], s: i64| -> Vec<Rat> {
        a.iter().zip(b).map(|(p, q)| p + q * Rat::from_integer(s.into())).collect()
    };
    let frame = [
        add(&unit_vec(dim, 0), &jx[0], 1),
        add(&unit_vec(dim, 1), &x, -1),
        add(&unit_vec(dim, 2), &jx[2], -1),
        add(&unit_vec(dim, 3), &jx[1], 1),
    ];
    let mut new_spec = spec.clone();
    new_spec.v0 = vec![Rat::zero(); m];
    Some(VNormalization {
        spec: new_spec,
        x1,
        frame,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordReport {
    pub order: usize,
    pub span_dim: usize,
    pub passed: bool,
    pub detail: Option<String>,
}

/// Checks that the generators square to `-1`, anticommute pairwise and
/// generate an associative algebra of dimension `2^k`.
pub fn clifford_verify(gens: &[RatMat]) -> CliffordReport {
    let k = gens.len();
    let fail = |d: String, span_dim| CliffordReport {
        order: k,
        span_dim,
        passed: false,
        detail: Some(d),
    };
    if k == 0 {
        return fail("no generators".into(), 0);
    }
    let n = gens[0].rows();
    if gens.iter().any(|g| g.rows() != n || g.cols() != n) {
        return fail("generators have different sizes".into(), 0);
    }
    let minus_id = -RatMat::identity(n);
    for (a, g) in gens.iter().enumerate() {
        if g.matmul(g) != minus_id {
            return fail(format!("generator {a} does not square to -1"), 0);
        }
    }
    for a in 0..k {
        for b in a + 1..k {
            if !(&gens[a].matmul(&gens[b]) + &gens[b].matmul(&gens[a])).is_zero() {
                return fail(format!("generators {a} and {b} do not anticommute"), 0);
            }
        }
    }
    let span_dim = algebra_span_dim(gens, 1usize << k.min(20));
    if span_dim != 1 << k {
        return fail(format!("generated algebra has dimension {span_dim}, expected {}", 1 << k), span_dim);
    }
    CliffordReport {
        order: k,
        span_dim,
        passed: true,
        detail: None,
    }
}

/// Dimension of the associative algebra generated by `gens` (with unit),
/// by closing the span under right multiplication. Stops early once the
/// dimension exceeds `cap`.
fn algebra_span_dim(gens: &[RatMat], cap: usize) -> usize {
    let n = gens[0].rows();
    let mut echelon = EchelonBasis::new();
    let flat = |m: &RatMat| {
        primitive_row(
            &m.entries()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect::<Vec<_>>(),
        )
    };
    let id = RatMat::identity(n);
    echelon.insert(flat(&id));
    let mut frontier = vec![id];
    while let Some(m) = frontier.pop() {
        for g in gens {
            let p = m.matmul(g);
            if echelon.insert(flat(&p)) {
                if echelon.rank() > cap {
                    return echelon.rank();
                }
                frontier.push(p);
            }
        }
    }
    echelon.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{int, rat};
    use crate::liealg::{build_hypercomplex_aa, s4};

    #[test]
    fn canonical_triple_is_quaternionic() {
        for n in 1..=4 {
            let t = canonical_triple(n);
            assert_eq!(t.quaternion_relations(), Ok(()));
            assert_eq!(t.j[0].matmul(&t.j[0].clone()), -RatMat::identity(4 * n));
        }
        let t = canonical_triple(1);
        assert_eq!(
            t.j[0],
            RatMat::from_i64(&[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, -1], &[0, 0, 1, 0]])
        );
    }

    #[test]
    fn s4_with_canonical_triple() {
        let l = s4();
        let t = canonical_triple(1);
        assert!(verify_hypercomplex(&l, &t).passed());
        let u: Vec<Vec<Rat>> = (1..4).map(|i| unit_vec(4, i)).collect();
        let d = decompose(&l, &t, &u).unwrap();
        assert_eq!(d.mu, int(1));
        assert!(d.h_basis.is_empty());
    }

    #[test]
    fn negated_j3_breaks_relations() {
        let mut t = canonical_triple(2);
        t.j[2] = -t.j[2].clone();
        let l = crate::liealg::LieAlgebra::abelian(8);
        let r = verify_hypercomplex(&l, &t);
        assert!(!r.quaternion_relations);
        assert!(!r.passed());
    }

    #[test]
    fn sphere_points() {
        let t = canonical_triple(2);
        let j = sphere_structure(&t, &[rat(3, 5), rat(4, 5), int(0)]).unwrap();
        assert_eq!(j.matrix().matmul(j.matrix()), -RatMat::identity(8));
        assert!(sphere_structure(&t, &[int(1), int(1), int(0)]).is_err());
    }

    #[test]
    fn clifford_pair_and_duplicate() {
        let t = canonical_triple(1);
        let r = clifford_verify(&[t.j[0].clone(), t.j[1].clone()]);
        assert!(r.passed);
        assert_eq!((r.order, r.span_dim), (2, 4));
        assert!(!clifford_verify(&[t.j[0].clone(), t.j[0].clone()]).passed);
    }

    #[test]
    fn normalization_kills_v() {
        // mu = 0, B = J1-like skew block (invertible), v0 = f.
        let mut spec = crate::liealg::AlmostAbelianSpec::scalar(2, int(0));
        spec.y = RatMat::from_i64(&[&[1]]);
        spec.v0 = vec![int(1), int(0), int(0), int(0)];
        let nv = normalize_v(&spec).unwrap();
        let (l, _) = build_hypercomplex_aa(&spec).unwrap();
        let p = nv.frame_matrix();
        let ad = p.inverse().unwrap().matmul(&l.ad(&nv.frame[0])).matmul(&p);
        assert_eq!(ad.block(1, 1, 7, 7), nv.spec.a_matrix());
    }
}
