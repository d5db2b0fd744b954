//! Characteristic and minimal polynomials, invariant factors, conjugacy over
//! the rationals and exponentials of nilpotent matrices.
//!
//! The characteristic polynomial (Faddeev–LeVerrier), the minimal polynomial
//! (Krylov dependence on matrix powers) and the invariant factors (Smith form
//! of `xI - M` over `Q[x]`) are computed by three unrelated routines, so each
//! one doubles as a check on the others.

use num_traits::{One, Zero};

use super::matrix::{span_rank, RatMat};
use super::poly::Poly;
use super::rat::{int, Rat};
use crate::error::{Error, Result};

fn require_square(m: &RatMat) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "expected a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )))
    }
}

/// `det(xI - M)`.
pub fn char_poly(m: &RatMat) -> Result<Poly> {
    require_square(m)?;
    let n = m.rows();
    let mut c = vec![Rat::zero(); n + 1];
    c[n] = Rat::one();
    let mut mk = RatMat::zeros(n, n);
    for k in 1..=n {
        mk = &m.matmul(&mk) + &RatMat::scalar(n, &c[n - k + 1]);
        c[n - k] = -m.matmul(&mk).trace() / int(k as i64);
    }
    Ok(Poly::new(c))
}

/// Monic generator of the annihilator ideal of `M`.
pub fn min_poly(m: &RatMat) -> Result<Poly> {
    require_square(m)?;
    let n = m.rows();
    let mut powers: Vec<Vec<Rat>> = vec![RatMat::identity(n).entries().to_vec()];
    let mut p = RatMat::identity(n);
    for k in 1..=n {
        p = p.matmul(m);
        let target = p.entries().to_vec();
        let basis = RatMat::from_columns(n * n, &powers);
        if let Some(sol) = basis.solve(&target) {
            let mut coeffs: Vec<Rat> = sol.into_iter().map(|x| -x).collect();
            coeffs.push(Rat::one());
            return Ok(Poly::new(coeffs));
        }
        powers.push(target);
        debug_assert_eq!(span_rank(&powers), k + 1);
    }
    unreachable!("Cayley-Hamilton bounds the degree by the size")
}

/// Nontrivial invariant factors `f1 | f2 | ... | fr`, all monic.
pub fn invariant_factors(m: &RatMat) -> Result<Vec<Poly>> {
    require_square(m)?;
    let n = m.rows();
    let mut a: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = -m[(i, j)].clone();
                    if i == j {
                        Poly::new(vec![c, Rat::one()])
                    } else {
                        Poly::constant(c)
                    }
                })
                .collect()
        })
        .collect();

    for t in 0..n {
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, e) in row.iter().enumerate().skip(t) {
                    if let Some(d) = e.degree() {
                        if best.is_none_or(|(_, _, bd)| d < bd) {
                            best = Some((i, j, d));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = best else { break };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let pivot = a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..n {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_rem(&pivot).0;
                for j in t..n {
                    let d = &q * &a[t][j];
                    a[i][j] = &a[i][j] - &d;
                }
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_rem(&pivot).0;
                for row in a.iter_mut().skip(t) {
                    let d = &q * &row[t];
                    row[j] = &row[j] - &d;
                }
                dirty |= !a[t][j].is_zero();
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| !pivot.divides(&a[i][j])));
            match bad {
                Some(i) => {
                    for j in t..n {
                        let s = &a[t][j] + &a[i][j];
                        a[t][j] = s;
                    }
                }
                None => break,
            }
        }
    }
    Ok((0..n)
        .map(|i| a[i][i].monic())
        .filter(|p| p.degree().is_some_and(|d| d > 0))
        .collect())
}

/// Similarity over the rationals (equivalently the reals) of two rational
/// matrices.
pub fn conjugate_over_field(m1: &RatMat, m2: &RatMat) -> Result<bool> {
    require_square(m1)?;
    require_square(m2)?;
    if m1.rows() != m2.rows() {
        return Err(Error::InvalidInput(format!(
            "size mismatch: {} vs {}",
            m1.rows(),
            m2.rows()
        )));
    }
    if char_poly(m1)? != char_poly(m2)? {
        return Ok(false);
    }
    Ok(invariant_factors(m1)? == invariant_factors(m2)?)
}

pub fn is_nilpotent(m: &RatMat) -> bool {
    m.is_square() && m.pow(m.rows() as u32).is_zero()
}

/// `exp(N) = sum N^j / j!`, finite because `N` is nilpotent.
pub fn exp_nilpotent(m: &RatMat) -> Result<RatMat> {
    require_square(m)?;
    let n = m.rows();
    let mut acc = RatMat::identity(n);
    let mut term = RatMat::identity(n);
    for j in 1..=n {
        term = term.matmul(m).scale(&Rat::new(1.into(), (j as i64).into()));
        if term.is_zero() {
            return Ok(acc);
        }
        acc = &acc + &term;
    }
    Err(Error::NotNilpotent)
}

/// Companion matrix of a monic polynomial (ones on the subdiagonal).
pub fn companion(p: &Poly) -> Result<RatMat> {
    let d = p.degree().filter(|&d| d > 0).ok_or_else(|| {
        Error::InvalidInput("companion matrix needs positive degree".into())
    })?;
    if !p.is_monic() {
        return Err(Error::InvalidInput("companion matrix needs a monic polynomial".into()));
    }
    let mut m = RatMat::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Rat::one();
    }
    for i in 0..d {
        m[(i, d - 1)] = -p.coeff(i);
    }
    Ok(m)
}

/// Rational canonical form: block diagonal of companion matrices of the
/// invariant factors.
pub fn rational_canonical_form(m: &RatMat) -> Result<RatMat> {
    let blocks = invariant_factors(m)?
        .iter()
        .map(companion)
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&RatMat> = blocks.iter().collect();
    Ok(RatMat::block_diag(&refs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_poly_small_cases() {
        let z = RatMat::zeros(2, 2);
        assert_eq!(char_poly(&z).unwrap(), Poly::from_i64(&[0, 0, 1]));
        let m = RatMat::from_i64(&[&[0, -1], &[1, 3]]);
        assert_eq!(char_poly(&m).unwrap(), Poly::from_i64(&[1, -3, 1]));
        let e6 = RatMat::from_i64(&[&[0, -1], &[1, 1]]);
        assert_eq!(char_poly(&e6).unwrap(), Poly::from_i64(&[1, -1, 1]));
        assert!(char_poly(&RatMat::zeros(2, 3)).is_err());
    }

    #[test]
    fn min_poly_small_cases() {
        assert_eq!(min_poly(&RatMat::identity(4)).unwrap(), Poly::from_i64(&[-1, 1]));
        let inv = RatMat::diag(&[1, 1, 1, -1, -1, -1, -1].map(int));
        assert_eq!(min_poly(&inv).unwrap(), Poly::from_i64(&[-1, 0, 1]));
        let j3 = RatMat::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(min_poly(&j3).unwrap(), Poly::from_i64(&[0, 0, 0, 1]));
    }

    #[test]
    fn invariant_factors_small_cases() {
        let x_minus_1 = Poly::from_i64(&[-1, 1]);
        assert_eq!(invariant_factors(&RatMat::identity(3)).unwrap(), vec![x_minus_1.clone(); 3]);
        let inv = RatMat::diag(&[1, 1, 1, -1, -1, -1, -1].map(int));
        let f = invariant_factors(&inv).unwrap();
        let x2m1 = Poly::from_i64(&[-1, 0, 1]);
        assert_eq!(f, vec![Poly::from_i64(&[1, 1]), x2m1.clone(), x2m1.clone(), x2m1]);
        let p = Poly::from_i64(&[1, -3, 1]);
        assert_eq!(invariant_factors(&companion(&p).unwrap()).unwrap(), vec![p]);
    }

    #[test]
    fn exp_of_jordan_block() {
        let n = RatMat::from_i64(&[&[0, 0], &[1, 0]]);
        assert_eq!(exp_nilpotent(&n).unwrap(), RatMat::from_i64(&[&[1, 0], &[1, 1]]));
        assert_eq!(exp_nilpotent(&RatMat::identity(2)), Err(Error::NotNilpotent));
    }
}
