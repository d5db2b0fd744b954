//! Chevalley–Eilenberg cohomology with trivial rational coefficients.
//!
//! Forms of degree `k` are coefficient vectors over the lexicographically
//! ordered basis `e^I`, `I = i1 < ... < ik`. The differential is the
//! antiderivation with `d e^m = -sum_{i<j} c^m_{ij} e^i ∧ e^j`, so that on
//! one-forms `dα(x, y) = -α([x, y])`.

use std::collections::HashMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::matrix::RatMat;
use crate::exact::rat::Rat;
use crate::exact::sparse::{primitive_row, EchelonBasis};
use crate::liealg::{unimodular, LieAlgebra};

/// The lexicographic basis of `Λ^k g*`, subsets stored as bitmasks.
#[derive(Clone, Debug)]
pub struct ExteriorBasis {
    pub dim: usize,
    pub degree: usize,
    subsets: Vec<u64>,
    index: HashMap<u64, usize>,
}

impl ExteriorBasis {
    pub fn new(dim: usize, degree: usize) -> Result<Self> {
        if dim > 64 {
            return Err(Error::InvalidInput("exterior algebra limited to dimension 64".into()));
        }
        if degree > dim {
            return Err(Error::InvalidInput(format!("degree {degree} exceeds dimension {dim}")));
        }
        let mut subsets = Vec::new();
        let mut cur = Vec::with_capacity(degree);
        lex_subsets(dim, degree, 0, &mut cur, &mut subsets);
        let index = subsets.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        Ok(ExteriorBasis {
            dim,
            degree,
            subsets,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn mask(&self, i: usize) -> u64 {
        self.subsets[i]
    }

    pub fn indices(&self, i: usize) -> Vec<usize> {
        bits(self.subsets[i])
    }

    pub fn position(&self, idx: &[usize]) -> Option<usize> {
        let mask = idx.iter().fold(0u64, |m, &i| m | (1 << i));
        self.index.get(&mask).copied()
    }
}

fn lex_subsets(dim: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<u64>) {
    if cur.len() == k {
        out.push(cur.iter().fold(0u64, |m, &i| m | (1 << i)));
        return;
    }
    for i in start..dim {
        if dim - i < k - cur.len() {
            break;
        }
        cur.push(i);
        lex_subsets(dim, k, i + 1, cur, out);
        cur.pop();
    }
}

fn bits(mut m: u64) -> Vec<usize> {
    let mut v = Vec::new();
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        v.push(i);
        m &= m - 1;
    }
    v
}

fn below(mask: u64, i: usize) -> u32 {
    (mask & ((1u64 << i) - 1)).count_ones()
}

/// `d(e^I)` for each basis element of degree `k`, as sparse vectors over
/// the degree `k+1` basis.
pub fn ce_differential_sparse(l: &LieAlgebra, k: usize) -> Result<Vec<Vec<(usize, Rat)>>> {
    let n = l.dim();
    if k > n {
        return Err(Error::InvalidInput(format!("degree {k} out of range 0..={n}")));
    }
    let src = ExteriorBasis::new(n, k)?;
    if k == n {
        return Ok(vec![Vec::new(); src.len()]);
    }
    let dst = ExteriorBasis::new(n, k + 1)?;
    // d e^m = sum over a < b of -c^m_ab e^a ∧ e^b.
    let mut de: Vec<Vec<(usize, usize, Rat)>> = vec![Vec::new(); n];
    for a in 0..n {
        for b in a + 1..n {
            for (m, c) in l.basis_bracket(a, b) {
                de[*m].push((a, b, -c.clone()));
            }
        }
    }
    let mut out = Vec::with_capacity(src.len());
    for s in 0..src.len() {
        let mask = src.mask(s);
        let mut acc: HashMap<usize, Rat> = HashMap::new();
        for (p, ip) in bits(mask).into_iter().enumerate() {
            let rest = mask & !(1u64 << ip);
            for (a, b, c) in &de[ip] {
                if rest & (1 << a) != 0 || rest & (1 << b) != 0 {
                    continue;
                }
                // Sequence (R_<ip, a, b, R_>ip) sorted: count inversions.
                let lo = rest & ((1u64 << ip) - 1);
                let hi = rest & !((1u64 << ip) - 1);
                let inv_a = lo.count_ones() - below(lo, *a) + below(hi, *a);
                let inv_b = lo.count_ones() - below(lo, *b) + below(hi, *b);
                let parity = p as u32 + inv_a + inv_b;
                let target = dst.index[&(rest | (1 << a) | (1 << b))];
                let term = if parity % 2 == 0 { c.clone() } else { -c.clone() };
                *acc.entry(target).or_insert_with(Rat::zero) += term;
            }
        }
        let mut col: Vec<(usize, Rat)> = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        col.sort_by_key(|(i, _)| *i);
        out.push(col);
    }
    Ok(out)
}

/// The matrix of `d: Λ^k → Λ^{k+1}` (columns indexed by degree `k`).
pub fn ce_differential(l: &LieAlgebra, k: usize) -> Result<RatMat> {
    let cols = ce_differential_sparse(l, k)?;
    let n = l.dim();
    let rows = ExteriorBasis::new(n, (k + 1).min(n))?.len();
    let rows = if k == n { 0 } else { rows };
    let mut m = RatMat::zeros(rows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col {
            m[(*i, j)] = v.clone();
        }
    }
    Ok(m)
}

/// Applies `d` to a degree-`k` form given by lexicographic coefficients.
pub fn d_form(l: &LieAlgebra, k: usize, coeffs: &[Rat]) -> Result<Vec<Rat>> {
    let cols = ce_differential_sparse(l, k)?;
    if coeffs.len() != cols.len() {
        return Err(Error::InvalidInput("form has wrong number of coefficients".into()));
    }
    let n = l.dim();
    let len = if k == n { 0 } else { ExteriorBasis::new(n, k + 1)?.len() };
    let mut out = vec![Rat::zero(); len];
    for (c, col) in coeffs.iter().zip(&cols) {
        if c.is_zero() {
            continue;
        }
        for (i, v) in col {
            out[*i] += c * v;
        }
    }
    Ok(out)
}

fn differential_rank(l: &LieAlgebra, k: usize) -> Result<usize> {
    let cols = ce_differential_sparse(l, k)?;
    let mut rows: Vec<_> = cols.iter().filter(|c| !c.is_empty()).map(|c| primitive_row(c)).collect();
    rows.sort_by_key(Vec::len);
    let mut basis = EchelonBasis::new();
    for r in rows {
        basis.insert(r);
    }
    Ok(basis.rank())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiVector(pub Vec<u64>);

impl BettiVector {
    pub fn poincare_dual(&self) -> bool {
        let b = &self.0;
        (0..b.len()).all(|k| b[k] == b[b.len() - 1 - k])
    }

    pub fn euler_characteristic(&self) -> i128 {
        self.0
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i128 } else { -(b as i128) })
            .sum()
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Betti numbers `b_k = dim Λ^k - rank d_k - rank d_{k-1}`, degrees
/// computed on scoped worker threads.
pub fn betti(l: &LieAlgebra) -> Result<BettiVector> {
    let n = l.dim();
    let ranks: Vec<usize> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..n).map(|k| s.spawn(move || differential_rank(l, k))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("rank worker panicked"))
            .collect::<Result<Vec<_>>>()
    })?;
    let b = (0..=n)
        .map(|k| {
            let rk = if k < n { ranks[k] } else { 0 };
            let rprev = if k > 0 { ranks[k - 1] } else { 0 };
            binomial(n as u64, k as u64) - rk as u64 - rprev as u64
        })
        .collect();
    Ok(BettiVector(b))
}

/// Betti numbers of the `4(2n+1)`-dimensional algebra with
/// `A = diag(0, 0, 0, 1, -1, ..., 1, -1)`, in closed form.
pub fn betti_closed_form(n: u64) -> Result<BettiVector> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let p = 4 * n;
    let c = |k: i64| -> u128 {
        if k < 0 {
            0
        } else {
            binomial(p, k as u64) as u128
        }
    };
    let dim = 8 * n + 4;
    let mut b = Vec::with_capacity(dim as usize + 1);
    for deg in 0..=dim as i64 {
        let k = deg / 2;
        let v: u128 = if deg % 2 == 0 {
            c(k).pow(2) + 6 * c(k - 1).pow(2) + c(k - 2).pow(2)
        } else {
            4 * (c(k).pow(2) + c(k - 1).pow(2))
        };
        b.push(
            u64::try_from(v).map_err(|_| Error::InvalidInput(format!("Betti number overflow at n = {n}")))?,
        );
    }
    Ok(BettiVector(b))
}

/// `p b_{2p} = 2 sum_{j=1}^{2p} (-1)^j (3j^2 - p) b_{2p-j}`.
pub fn salamon_check(b: &BettiVector, p: usize) -> Result<bool> {
    if b.0.len() < 2 * p + 1 {
        return Err(Error::InvalidInput(format!("need at least {} Betti numbers", 2 * p + 1)));
    }
    let pi = p as i128;
    let lhs = pi * b.0[2 * p] as i128;
    let rhs: i128 = (1..=2 * p)
        .map(|j| {
            let ji = j as i128;
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * (3 * ji * ji - pi) * b.0[2 * p - j] as i128
        })
        .sum();
    Ok(lhs == 2 * rhs)
}

/// Every odd-degree Betti number divisible by 4.
pub fn wakakuwa_check(b: &BettiVector) -> bool {
    b.0.iter().skip(1).step_by(2).all(|x| x % 4 == 0)
}

/// Summary used by reports: Betti numbers plus duality and the two
/// hyper-Kähler-type relations with `p = dim / 4`.
#[derive(Clone, Debug, Serialize)]
pub struct BettiReport {
    pub betti: Vec<u64>,
    pub poincare_dual: bool,
    pub unimodular: bool,
    pub salamon: Option<SalamonReport>,
    pub wakakuwa: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SalamonReport {
    pub p: usize,
    pub holds: bool,
}

pub fn betti_report(l: &LieAlgebra) -> Result<BettiReport> {
    let b = betti(l)?;
    let salamon = if l.dim() % 4 == 0 && l.dim() > 0 {
        let p = l.dim() / 4;
        Some(SalamonReport {
            p,
            holds: salamon_check(&b, p)?,
        })
    } else {
        None
    };
    Ok(BettiReport {
        poincare_dual: b.poincare_dual(),
        unimodular: unimodular(l),
        wakakuwa: wakakuwa_check(&b),
        salamon,
        betti: b.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::int;
    use crate::liealg::s4;

    #[test]
    fn lex_order() {
        let b = ExteriorBasis::new(4, 2).unwrap();
        let idx: Vec<Vec<usize>> = (0..b.len()).map(|i| b.indices(i)).collect();
        assert_eq!(idx, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn s4_degree_one() {
        // [e0, e_a] = e_a, so d e^a = -e^0 ∧ e^a.
        let l = s4();
        let d = ce_differential(&l, 1).unwrap();
        let two = ExteriorBasis::new(4, 2).unwrap();
        for a in 1..4 {
            let row = two.position(&[0, a]).unwrap();
            assert_eq!(d[(row, a)], int(-1));
        }
        assert!(d.column(0).iter().all(Zero::is_zero));
    }

    #[test]
    fn d_squared_vanishes_on_s4() {
        let l = s4();
        for k in 0..4 {
            let a = ce_differential(&l, k).unwrap();
            let b = ce_differential(&l, k + 1).unwrap();
            if b.rows() > 0 {
                assert!(b.matmul(&a).is_zero());
            }
        }
    }

    #[test]
    fn torus_is_binomial() {
        let b = betti(&LieAlgebra::abelian(8)).unwrap();
        assert_eq!(b.0, (0..=8).map(|k| binomial(8, k)).collect::<Vec<_>>());
        assert!(salamon_check(&b, 2).unwrap());
        let mut bad = b.clone();
        bad.0[4] += 1;
        assert!(!salamon_check(&bad, 2).unwrap());
    }

    #[test]
    fn closed_form_first_terms() {
        let b = betti_closed_form(1).unwrap();
        assert_eq!(&b.0[..4], &[1, 4, 22, 68]);
        assert_eq!(b.euler_characteristic(), 0);
        assert!(wakakuwa_check(&b));
    }
}
