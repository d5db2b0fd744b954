//! Lie algebras given by rational structure constants, almost abelian
//! algebras `R e0 ⋉_A R^d`, and the quaternionic block family.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::canonical::conjugate_over_field;
use crate::exact::matrix::{is_zero_vec, RatMat};
use crate::exact::rat::{rational_roots, Rat};
use crate::exact::char_poly;
use crate::hypercomplex::{canonical_triple, HypercomplexTriple};

/// Sparse bracket of two basis vectors: `(k, c)` pairs sorted by `k`.
pub type SparseVec = Vec<(usize, Rat)>;

/// A finite-dimensional Lie algebra over the rationals on a fixed basis
/// `e_0, ..., e_{dim-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    // brackets[i * dim + j] = [e_i, e_j]
    brackets: Vec<SparseVec>,
}

fn sparse_from_dense(v: &[Rat]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, c.clone()))
        .collect()
}

impl LieAlgebra {
    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            dim,
            brackets: vec![Vec::new(); dim * dim],
        }
    }

    /// Builds from `[e_i, e_j]` for `i < j`; the rest follows by
    /// antisymmetry. The Jacobi identity is not enforced here.
    pub fn from_bracket_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Vec<Rat>) -> Self {
        let mut l = Self::abelian(dim);
        for i in 0..dim {
            for j in i + 1..dim {
                let v = f(i, j);
                l.set_bracket(i, j, &v);
            }
        }
        l
    }

    /// Builds from a full constant array `c[i][j][k]`; antisymmetry is
    /// checked.
    pub fn from_constants(dim: usize, c: &[Vec<Vec<Rat>>]) -> Result<Self> {
        if c.len() != dim || c.iter().any(|r| r.len() != dim || r.iter().any(|v| v.len() != dim)) {
            return Err(Error::InvalidInput("structure constant array has wrong shape".into()));
        }
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    if c[i][j][k] != -c[j][i][k].clone() {
                        return Err(Error::InvalidInput(format!(
                            "bracket not antisymmetric at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(Self::from_bracket_fn(dim, |i, j| c[i][j].clone()))
    }

    /// Sets `[e_i, e_j] = v` and `[e_j, e_i] = -v`.
    pub fn set_bracket(&mut self, i: usize, j: usize, v: &[Rat]) {
        assert!(i < self.dim && j < self.dim && v.len() == self.dim);
        if i == j {
            assert!(is_zero_vec(v), "[e_i, e_i] must vanish");
            return;
        }
        let s = sparse_from_dense(v);
        let neg = s.iter().map(|(k, c)| (*k, -c.clone())).collect();
        self.brackets[i * self.dim + j] = s;
        self.brackets[j * self.dim + i] = neg;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> &[(usize, Rat)] {
        &self.brackets[i * self.dim + j]
    }

    /// `c^k_{ij}`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> Rat {
        self.basis_bracket(i, j)
            .iter()
            .find(|(kk, _)| *kk == k)
            .map_or_else(Rat::zero, |(_, c)| c.clone())
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.iter().all(Vec::is_empty)
    }

    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let s = xi * yj;
                for (k, c) in self.basis_bracket(i, j) {
                    out[*k] += &s * c;
                }
            }
        }
        out
    }

    /// `ad(e_i)` as a matrix; column `j` holds `[e_i, e_j]`.
    pub fn ad_basis(&self, i: usize) -> RatMat {
        let mut m = RatMat::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            for (k, c) in self.basis_bracket(i, j) {
                m[(*k, j)] = c.clone();
            }
        }
        m
    }

    pub fn ad(&self, x: &[Rat]) -> RatMat {
        let mut m = RatMat::zeros(self.dim, self.dim);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                m = &m + &self.ad_basis(i).scale(xi);
            }
        }
        m
    }

    /// Span of all brackets `[a, b]` with `a` from `xs`, `b` from `ys`,
    /// returned as a row-reduced basis.
    fn bracket_span(&self, xs: &[Vec<Rat>], ys: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
        let mut vecs = Vec::new();
        for x in xs {
            for y in ys {
                let b = self.bracket(x, y);
                if !is_zero_vec(&b) {
                    vecs.push(b);
                }
            }
        }
        row_basis(&vecs, self.dim)
    }
}

/// A row-reduced basis of the span of `vecs`.
pub fn row_basis(vecs: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    if vecs.is_empty() {
        return Vec::new();
    }
    let m = RatMat::from_rows(vecs.to_vec()).expect("uniform vector lengths");
    let (r, pivots) = m.rref();
    (0..pivots.len()).map(|i| r.row(i)[..dim].to_vec()).collect()
}

pub fn standard_basis(dim: usize) -> Vec<Vec<Rat>> {
    (0..dim).map(|i| crate::exact::matrix::unit_vec(dim, i)).collect()
}

/// Basis triples `(i, j, k)`, `i < j < k`, where the Jacobi identity fails.
pub fn jacobi_check(l: &LieAlgebra) -> Vec<(usize, usize, usize)> {
    let n = l.dim();
    // [[e_a, e_b], e_c] accumulated into `acc` using the sparse brackets.
    let add_term = |acc: &mut Vec<Rat>, a: usize, b: usize, c: usize| {
        for (m, cm) in l.basis_bracket(a, b) {
            for (k, ck) in l.basis_bracket(*m, c) {
                acc[*k] += cm * ck;
            }
        }
    };
    let mut bad = Vec::new();
    let mut acc = vec![Rat::zero(); n];
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                add_term(&mut acc, i, j, k);
                add_term(&mut acc, j, k, i);
                add_term(&mut acc, k, i, j);
                if !is_zero_vec(&acc) {
                    bad.push((i, j, k));
                    acc.iter_mut().for_each(|x| x.set_zero());
                }
            }
        }
    }
    bad
}

/// `R e0 ⋉_A R^d` on the basis `(e0, e1, ..., ed)` with
/// `[e0, e_i] = sum_j A_{ji} e_j`.
pub fn build_almost_abelian(a: &RatMat) -> Result<LieAlgebra> {
    if !a.is_square() {
        return Err(Error::InvalidInput("almost abelian action must be square".into()));
    }
    let d = a.rows();
    let mut l = LieAlgebra::abelian(d + 1);
    for i in 0..d {
        let mut v = vec![Rat::zero(); d + 1];
        for j in 0..d {
            v[j + 1] = a[(j, i)].clone();
        }
        l.set_bracket(0, i + 1, &v);
    }
    Ok(l)
}

/// `ad(e0)` restricted to `u = span(e1..ed)`, for an algebra whose first
/// basis vector acts on an abelian ideal spanned by the rest.
pub fn almost_abelian_action(l: &LieAlgebra) -> Result<RatMat> {
    let n = l.dim();
    if n == 0 {
        return Err(Error::InvalidInput("empty algebra".into()));
    }
    for i in 1..n {
        for j in i + 1..n {
            if !l.basis_bracket(i, j).is_empty() {
                return Err(Error::InvalidInput(format!(
                    "span(e1..) is not abelian: [e{i}, e{j}] != 0"
                )));
            }
        }
        if l.basis_bracket(0, i).iter().any(|(k, _)| *k == 0) {
            return Err(Error::InvalidInput("span(e1..) is not an ideal".into()));
        }
    }
    Ok(l.ad_basis(0).block(1, 1, n - 1, n - 1))
}

pub fn unimodular(l: &LieAlgebra) -> bool {
    (0..l.dim()).all(|i| l.ad_basis(i).trace().is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotencyData {
    pub nilpotent: bool,
    /// Smallest `k` with `g^{k+1} = 0` in the lower central series.
    pub step: Option<usize>,
    pub solvable: bool,
    /// Smallest `k` with `g^{(k)} = 0` in the derived series.
    pub derived_length: Option<usize>,
}

pub fn nilpotency_data(l: &LieAlgebra) -> NilpotencyData {
    let n = l.dim();
    let g = standard_basis(n);

    let mut step = None;
    let mut cur = g.clone();
    for k in 1..=n.max(1) {
        let next = l.bracket_span(&g, &cur);
        if next.is_empty() {
            step = Some(k);
            break;
        }
        if next.len() == cur.len() {
            break;
        }
        cur = next;
    }

    let mut derived_length = None;
    let mut cur = g;
    for k in 1..=n.max(1) {
        let next = l.bracket_span(&cur, &cur);
        if next.is_empty() {
            derived_length = Some(k);
            break;
        }
        if next.len() == cur.len() {
            break;
        }
        cur = next;
    }
    NilpotencyData {
        nilpotent: step.is_some(),
        step,
        solvable: derived_length.is_some(),
        derived_length,
    }
}

/// Some `c != 0` with `c·A1` conjugate to `A2`, if one exists among the
/// rational candidates forced by the characteristic polynomials.
pub fn isomorphic_aa(a1: &RatMat, a2: &RatMat) -> Option<Rat> {
    if !a1.is_square() || !a2.is_square() || a1.rows() != a2.rows() {
        return None;
    }
    let d = a1.rows();
    let p1 = char_poly(a1).ok()?;
    let p2 = char_poly(a2).ok()?;
    // Coefficient of x^{d-k} in char(c·A) is c^k times that of char(A).
    let first = (1..=d).find(|&k| !p1.coeff(d - k).is_zero());
    let candidates = match first {
        None => vec![Rat::one()],
        Some(k) => {
            let ratio = p2.coeff(d - k) / p1.coeff(d - k);
            rational_roots(&ratio, k as u32)
                .into_iter()
                .filter(|c| !c.is_zero())
                .collect()
        }
    };
    candidates
        .into_iter()
        .find(|c| conjugate_over_field(&a1.scale(c), a2).unwrap_or(false))
}

/// Block data of a hypercomplex almost abelian algebra of quaternionic
/// dimension `n`: `mu`, `v0` in `h`, and the blocks `X, Y, Z, W` of `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostAbelianSpec {
    pub n: usize,
    pub mu: Rat,
    pub v0: Vec<Rat>,
    pub x: RatMat,
    pub y: RatMat,
    pub z: RatMat,
    pub w: RatMat,
}

impl AlmostAbelianSpec {
    /// Spec with `v0 = 0` and `B = 0`.
    pub fn scalar(n: usize, mu: Rat) -> Self {
        let m = n.saturating_sub(1);
        AlmostAbelianSpec {
            n,
            mu,
            v0: vec![Rat::zero(); 4 * m],
            x: RatMat::zeros(m, m),
            y: RatMat::zeros(m, m),
            z: RatMat::zeros(m, m),
            w: RatMat::zeros(m, m),
        }
    }

    pub fn new(n: usize, mu: Rat, v0: Vec<Rat>, x: RatMat, y: RatMat, z: RatMat, w: RatMat) -> Result<Self> {
        let s = AlmostAbelianSpec { n, mu, v0, x, y, z, w };
        s.validate()?;
        Ok(s)
    }

    /// Builds from a raw `B` on `h`, which must commute with the canonical
    /// triple.
    pub fn from_b(n: usize, mu: Rat, v0: Vec<Rat>, b: &RatMat) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("n must be at least 1".into()));
        }
        let m = n - 1;
        if b.rows() != 4 * m || b.cols() != 4 * m {
            return Err(Error::InvalidSpec(format!("B must be {0}x{0}", 4 * m)));
        }
        let t = canonical_triple(n);
        for (alpha, j) in t.restrict_h().iter().enumerate() {
            if !b.commutator(j).is_zero() {
                return Err(Error::InvalidSpec(format!("B does not commute with J{}", alpha + 1)));
            }
        }
        let s = AlmostAbelianSpec {
            n,
            mu,
            v0,
            x: b.block(0, 0, m, m),
            y: b.block(m, 0, m, m),
            z: b.block(2 * m, 0, m, m),
            w: b.block(3 * m, 0, m, m),
        };
        s.validate()?;
        debug_assert_eq!(&s.b_matrix(), b);
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidSpec("n must be at least 1".into()));
        }
        let m = self.n - 1;
        if self.v0.len() != 4 * m {
            return Err(Error::InvalidSpec(format!(
                "v0 has length {}, expected {}",
                self.v0.len(),
                4 * m
            )));
        }
        for (name, b) in [("X", &self.x), ("Y", &self.y), ("Z", &self.z), ("W", &self.w)] {
            if b.rows() != m || b.cols() != m {
                return Err(Error::InvalidSpec(format!("{name} must be {m}x{m}")));
            }
        }
        Ok(())
    }

    /// Dimension of the algebra, `4n`.
    pub fn dim(&self) -> usize {
        4 * self.n
    }

    /// `B` on `h` in the basis `(f, J1 f, J2 f, J3 f)`.
    pub fn b_matrix(&self) -> RatMat {
        let m = self.n - 1;
        let (x, y, z, w) = (&self.x, &self.y, &self.z, &self.w);
        let blocks = [
            [x.clone(), -y, -z, -w],
            [y.clone(), x.clone(), w.clone(), -z],
            [z.clone(), -w, x.clone(), y.clone()],
            [w.clone(), z.clone(), -y, x.clone()],
        ];
        let mut b = RatMat::zeros(4 * m, 4 * m);
        for (i, row) in blocks.iter().enumerate() {
            for (j, blk) in row.iter().enumerate() {
                b.set_block(i * m, j * m, blk);
            }
        }
        b
    }

    /// `v_alpha = J_alpha v0` for `alpha = 1, 2, 3`.
    pub fn v_alpha(&self) -> [Vec<Rat>; 3] {
        let t = canonical_triple(self.n).restrict_h();
        [t[0].mul_vec(&self.v0), t[1].mul_vec(&self.v0), t[2].mul_vec(&self.v0)]
    }

    /// The `(4n-1)×(4n-1)` action `A` of `e0` on `u = span(e1, e2, e3) ⊕ h`.
    pub fn a_matrix(&self) -> RatMat {
        let d = 4 * self.n - 1;
        let mut a = RatMat::zeros(d, d);
        for alpha in 0..3 {
            a[(alpha, alpha)] = self.mu.clone();
        }
        for (alpha, v) in self.v_alpha().iter().enumerate() {
            for (i, c) in v.iter().enumerate() {
                a[(3 + i, alpha)] = c.clone();
            }
        }
        a.set_block(3, 3, &self.b_matrix());
        a
    }

    /// `B = lambda I + U` with `lambda = tr(B) / (4(n-1))`.
    pub fn lambda(&self) -> Rat {
        if self.n == 1 {
            return Rat::zero();
        }
        self.b_matrix().trace() / Rat::from_integer(((4 * (self.n - 1)) as i64).into())
    }

    pub fn v_is_zero(&self) -> bool {
        is_zero_vec(&self.v0)
    }
}

/// The algebra of a spec with its canonical triple, on the basis
/// `(e0, e1, e2, e3, f.., J1 f.., J2 f.., J3 f..)`.
pub fn build_hypercomplex_aa(spec: &AlmostAbelianSpec) -> Result<(LieAlgebra, HypercomplexTriple)> {
    spec.validate()?;
    let t = canonical_triple(spec.n);
    let b = spec.b_matrix();
    for (alpha, j) in t.restrict_h().iter().enumerate() {
        if !b.commutator(j).is_zero() {
            return Err(Error::InvalidSpec(format!("B does not commute with J{}", alpha + 1)));
        }
    }
    let l = build_almost_abelian(&spec.a_matrix())?;
    Ok((l, t))
}

/// Quaternionic dimension `2n + 1` with `mu = 0`, `v0 = 0`, `Y = Z = W = 0`
/// and `X = diag(1, -1, ..., 1, -1)` of size `2n`.
pub fn hyperbolic_family_spec(n: usize) -> Result<AlmostAbelianSpec> {
    if n == 0 {
        return Err(Error::InvalidSpec("n must be at least 1".into()));
    }
    let m = 2 * n;
    let x = RatMat::diag(&(0..m).map(|i| if i % 2 == 0 { Rat::one() } else { -Rat::one() }).collect::<Vec<_>>());
    let zero = RatMat::zeros(m, m);
    AlmostAbelianSpec::new(2 * n + 1, Rat::zero(), vec![Rat::zero(); 4 * m], x, zero.clone(), zero.clone(), zero)
}

/// The 4-dimensional algebra with `A = I3`.
pub fn s4() -> LieAlgebra {
    build_almost_abelian(&RatMat::identity(3)).expect("square")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{int, rat};

    fn so3_corrupted() -> LieAlgebra {
        let mut l = LieAlgebra::abelian(3);
        l.set_bracket(0, 1, &[int(1), int(0), int(1)]);
        l.set_bracket(1, 2, &[int(1), int(0), int(0)]);
        l.set_bracket(2, 0, &[int(0), int(1), int(0)]);
        l
    }

    #[test]
    fn jacobi_detects_corruption() {
        let mut l = LieAlgebra::abelian(3);
        l.set_bracket(0, 1, &[int(0), int(0), int(1)]);
        l.set_bracket(1, 2, &[int(1), int(0), int(0)]);
        l.set_bracket(2, 0, &[int(0), int(1), int(0)]);
        assert!(jacobi_check(&l).is_empty());
        // [[e0,e1],e2] = [e0 + e2, e2] = -e1, the other two terms vanish.
        assert_eq!(jacobi_check(&so3_corrupted()), vec![(0, 1, 2)]);
    }

    #[test]
    fn s4_is_not_unimodular() {
        let l = s4();
        assert!(!unimodular(&l));
        assert!(jacobi_check(&l).is_empty());
        let nd = nilpotency_data(&l);
        assert!(!nd.nilpotent && nd.solvable);
    }

    #[test]
    fn abelian_step_one() {
        let nd = nilpotency_data(&LieAlgebra::abelian(8));
        assert_eq!(nd.step, Some(1));
    }

    #[test]
    fn isomorphic_up_to_scalar() {
        let a = RatMat::scalar(3, &int(2));
        assert_eq!(isomorphic_aa(&a, &RatMat::identity(3)), Some(rat(1, 2)));
        let d1 = RatMat::diag(&[int(1), int(-1)]);
        let d2 = RatMat::diag(&[int(2), int(-2)]);
        assert_eq!(isomorphic_aa(&d1, &d2), Some(int(2)));
        assert_eq!(isomorphic_aa(&d1, &d1), Some(int(1)));
        assert_eq!(isomorphic_aa(&d1, &RatMat::diag(&[int(1), int(2)])), None);
    }

    #[test]
    fn from_b_rejects_non_quaternionic() {
        // Swaps f and J1 f: anticommutes with J1 on that block.
        let b = RatMat::from_i64(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]]);
        assert!(matches!(
            AlmostAbelianSpec::from_b(2, int(0), vec![int(0); 4], &b),
            Err(Error::InvalidSpec(_))
        ));
    }
}
