//! Sparse exact rank by fraction-free elimination.
//!
//! Rows are scaled to primitive integer vectors, then reduced against a
//! table of pivot rows keyed by leading column. Each reduction step is the
//! cross-multiplied combination `p·row - r·pivot` followed by division by the
//! content, which keeps coefficients small on the very sparse differentials
//! this is used for.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rat::Rat;

/// A sparse row: strictly increasing column indices with nonzero values.
pub type SparseRow = Vec<(usize, BigInt)>;

/// Clears denominators and removes the content; the result is primitive with
/// a positive leading entry.
pub fn primitive_row(entries: &[(usize, Rat)]) -> SparseRow {
    let mut row: Vec<(usize, &Rat)> = entries.iter().filter(|(_, v)| !v.is_zero()).map(|(c, v)| (*c, v)).collect();
    row.sort_by_key(|(c, _)| *c);
    let l = row.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
    let ints: SparseRow = row
        .into_iter()
        .map(|(c, v)| (c, (v * Rat::from_integer(l.clone())).to_integer()))
        .collect();
    normalize(ints)
}

fn normalize(mut row: SparseRow) -> SparseRow {
    let g = row.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
    let flip = row.first().is_some_and(|(_, v)| v.is_negative());
    if !g.is_zero() && !(g.is_one() && !flip) {
        let g = if flip { -g } else { g };
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
    row
}

// a·x - b·y, merged by column.
fn combine(a: &BigInt, x: &SparseRow, b: &BigInt, y: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental row-echelon basis over the rationals.
#[derive(Default, Debug, Clone)]
pub struct EchelonBasis {
    pivots: HashMap<usize, SparseRow>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the basis; inserts it and returns `true` if it
    /// was independent.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let mut row = normalize(row);
        while let Some((lead, lv)) = row.first().cloned() {
            let Some(p) = self.pivots.get(&lead) else {
                self.pivots.insert(lead, row);
                return true;
            };
            let pv = &p[0].1;
            let g = pv.gcd(&lv);
            let (a, b) = (pv / &g, &lv / &g);
            row = normalize(combine(&a, &row, &b, p));
        }
        false
    }
}

/// Rank of a matrix given by sparse rational rows.
pub fn sparse_rank(rows: &[Vec<(usize, Rat)>]) -> usize {
    let mut basis = EchelonBasis::new();
    let mut order: Vec<&Vec<(usize, Rat)>> = rows.iter().collect();
    // Short rows first keeps fill-in down.
    order.sort_by_key(|r| r.len());
    for r in order {
        basis.insert(primitive_row(r));
    }
    basis.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::matrix::RatMat;
    use crate::exact::rat::{int, rat};

    fn dense_to_sparse(m: &RatMat) -> Vec<Vec<(usize, Rat)>> {
        (0..m.rows())
            .map(|i| {
                m.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (j, v.clone()))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn matches_dense_rank() {
        let m = RatMat::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1], &[1, 3, 4]]);
        assert_eq!(sparse_rank(&dense_to_sparse(&m)), m.rank());
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn fractional_rows() {
        let rows = vec![vec![(0, rat(1, 2)), (3, rat(1, 3))], vec![(0, int(3)), (3, int(2))]];
        assert_eq!(sparse_rank(&rows), 1);
    }
}
