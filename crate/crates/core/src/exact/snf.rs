//! Smith normal form over the integers with unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::RatMat;
use super::rat::Rat;
use crate::error::{Error, Result};

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal, nonnegative,
/// `d1 | d2 | ...`, nonzero entries first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub u: RatMat,
    pub d: RatMat,
    pub v: RatMat,
}

impl SnfResult {
    /// The diagonal of `D` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].numer().clone())
            .collect()
    }
}

type IMat = Vec<Vec<BigInt>>;

fn identity(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn to_ratmat(m: &IMat, rows: usize, cols: usize) -> RatMat {
    RatMat::from_fn(rows, cols, |i, j| Rat::from_integer(m[i][j].clone()))
}

// row_a += k * row_b
fn row_axpy(m: &mut IMat, a: usize, b: usize, k: &BigInt) {
    let (src, dst) = if a < b {
        let (lo, hi) = m.split_at_mut(b);
        (&hi[0], &mut lo[a])
    } else {
        let (lo, hi) = m.split_at_mut(a);
        (&lo[b], &mut hi[0])
    };
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d += k * s;
        }
    }
}

fn col_axpy(m: &mut IMat, a: usize, b: usize, k: &BigInt) {
    for row in m.iter_mut() {
        if !row[b].is_zero() {
            let t = k * &row[b];
            row[a] += t;
        }
    }
}

fn swap_cols(m: &mut IMat, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Smith normal form of an integer matrix.
pub fn snf(m: &RatMat) -> Result<SnfResult> {
    if !m.is_integer() {
        return Err(Error::InvalidInput("Smith normal form needs integer entries".into()));
    }
    let (r, c) = (m.rows(), m.cols());
    let mut a: IMat = (0..r).map(|i| m.row(i).iter().map(|x| x.numer().clone()).collect()).collect();
    let mut u = identity(r);
    // Column operations are tracked on V's transpose so they become row ops.
    let mut vt = identity(c);

    for t in 0..r.min(c) {
        loop {
            // Smallest nonzero pivot in the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(a, u, vt, r, c);
            };
            a.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut a, t, pj);
            vt.swap(t, pj);

            let mut dirty = false;
            for i in t + 1..r {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = -a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..c {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = -a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, t, &q);
                row_axpy(&mut vt, j, t, &q);
                dirty |= !a[t][j].is_zero();
            }
            if dirty {
                continue;
            }
            // Enforce divisibility of the trailing block by the pivot.
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    row_axpy(&mut a, t, i, &one);
                    row_axpy(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    finish(a, u, vt, r, c)
}

fn finish(a: IMat, u: IMat, vt: IMat, r: usize, c: usize) -> Result<SnfResult> {
    let v: IMat = (0..c).map(|i| (0..c).map(|j| vt[j][i].clone()).collect()).collect();
    Ok(SnfResult {
        u: to_ratmat(&u, r, r),
        d: to_ratmat(&a, r, c),
        v: to_ratmat(&v, c, c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &RatMat) -> SnfResult {
        let s = snf(m).unwrap();
        assert_eq!(s.u.matmul(m).matmul(&s.v), s.d);
        assert!(s.u.determinant().unwrap().abs().is_one());
        assert!(s.v.determinant().unwrap().abs().is_one());
        s
    }

    #[test]
    fn two_by_two() {
        let s = check(&RatMat::from_i64(&[&[2, 4], &[6, 8]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn zeros_move_last() {
        let m = RatMat::diag(&[0, 0, 0, 2, 2, 2, 2].map(crate::exact::rat::int));
        let s = check(&m);
        let d: Vec<i64> = s.diagonal().iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(d, vec![2, 2, 2, 2, 0, 0, 0]);
    }

    #[test]
    fn divisibility_is_enforced() {
        let s = check(&RatMat::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn rejects_fractions() {
        let m = RatMat::diag(&[crate::exact::rat::rat(1, 2)]);
        assert!(snf(&m).is_err());
    }
}
