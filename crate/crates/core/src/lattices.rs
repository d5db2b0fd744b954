//! Lattices in almost abelian groups `R ⋉_φ R^d`, `φ(t) = exp(tA)`.
//!
//! Such a group has a lattice as soon as some `exp(t0 A)`, `t0 ≠ 0`, is
//! conjugate to an integer matrix `E`, and then `Γ ≅ Z ⋉_E Z^d` with
//! `Γ/[Γ,Γ] ≅ Z ⊕ coker(I - E)`. Conjugacy over the reals is certified by
//! comparing invariant factors. `exp(t0 A)` is never evaluated numerically:
//! for the supported times it is replaced by a rational matrix with the same
//! rational canonical form.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::canonical::{char_poly, companion, exp_nilpotent, invariant_factors, is_nilpotent, min_poly};
use crate::exact::matrix::RatMat;
use crate::exact::poly::Poly;
use crate::exact::rat::{int, isqrt_exact, parse_rat, Rat};
use crate::exact::snf::snf;

/// The supported values of `t0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecialTime {
    /// `t = 2π/m`.
    RationalMultipleOfTwoPi(u32),
    /// `t = log((m + sqrt(m² - 4))/2)`, so `e^t + e^-t = m`.
    HyperbolicLog(i64),
    RationalTime(Rat),
}

impl fmt::Display for SpecialTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecialTime::RationalMultipleOfTwoPi(1) => write!(f, "2pi"),
            SpecialTime::RationalMultipleOfTwoPi(m) => write!(f, "2pi/{m}"),
            SpecialTime::HyperbolicLog(m) => write!(f, "hyperbolic:{m}"),
            SpecialTime::RationalTime(t) => write!(f, "{t}"),
        }
    }
}

impl Serialize for SpecialTime {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for SpecialTime {
    type Err = Error;

    /// Accepts `2pi`, `2pi/m`, `pi`, `pi/k`, `hyperbolic:m` and rationals.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().replace(' ', "");
        let bad = || Error::InvalidInput(format!("cannot parse time {s:?}"));
        let positive = |t: &str| t.parse::<u32>().ok().filter(|m| *m > 0).ok_or_else(bad);
        if let Some(m) = s.strip_prefix("hyperbolic:") {
            return Ok(SpecialTime::HyperbolicLog(m.parse().map_err(|_| bad())?));
        }
        if s == "2pi" {
            return Ok(SpecialTime::RationalMultipleOfTwoPi(1));
        }
        if s == "pi" {
            return Ok(SpecialTime::RationalMultipleOfTwoPi(2));
        }
        if let Some(m) = s.strip_prefix("2pi/") {
            return Ok(SpecialTime::RationalMultipleOfTwoPi(positive(m)?));
        }
        if let Some(k) = s.strip_prefix("pi/") {
            return Ok(SpecialTime::RationalMultipleOfTwoPi(2 * positive(k)?));
        }
        Ok(SpecialTime::RationalTime(parse_rat(&s)?))
    }
}

/// One piece of the spectral data of `A` relevant to `exp(tA)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SpectralBlock {
    /// Zero action on a subspace of this size.
    Zero { size: usize },
    /// Nilpotent part of the generalized kernel.
    Nilpotent { size: usize, matrix: Vec<Vec<String>> },
    /// Eigenvalues `±i·speed`, each with this multiplicity.
    Rotation { speed: i64, multiplicity: usize },
    /// Eigenvalues `±scale`, each with this multiplicity.
    Hyperbolic { scale: i64, multiplicity: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralBlockDecomposition {
    pub blocks: Vec<SpectralBlock>,
}

/// `Γ/[Γ,Γ] = Z^free_rank ⊕ Z_{t1} ⊕ ... ⊕ Z_{tk}`, `t1 | t2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianizationResult {
    pub free_rank: usize,
    #[serde(serialize_with = "ser_strings")]
    pub torsion: Vec<BigInt>,
}

impl AbelianizationResult {
    /// Trivial factors (`Z_1`) are dropped.
    pub fn new(free_rank: usize, torsion: &[i64]) -> Self {
        AbelianizationResult {
            free_rank,
            torsion: torsion.iter().filter(|&&t| t > 1).map(|&t| BigInt::from(t)).collect(),
        }
    }
}

impl fmt::Display for AbelianizationResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z^{}", self.free_rank)?;
        let mut i = 0;
        while i < self.torsion.len() {
            let t = &self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|u| *u == t).count();
            if run == 1 {
                write!(f, " + Z_{t}")?;
            } else {
                write!(f, " + (Z_{t})^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

fn ser_strings<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

fn require_integer_square(e: &RatMat) -> Result<()> {
    if !e.is_square() {
        return Err(Error::InvalidInput("expected a square matrix".into()));
    }
    if !e.is_integer() {
        return Err(Error::InvalidInput("expected an integer matrix".into()));
    }
    Ok(())
}

/// `Z ⊕ coker(I - E)`.
pub fn abelianization(e: &RatMat) -> Result<AbelianizationResult> {
    require_integer_square(e)?;
    let d = e.rows();
    let m = &RatMat::identity(d) - e;
    let diag = snf(&m)?.diagonal();
    let zeros = diag.iter().filter(|x| x.is_zero()).count();
    let torsion = diag.into_iter().filter(|x| *x > BigInt::one()).collect();
    Ok(AbelianizationResult {
        free_rank: 1 + zeros,
        torsion,
    })
}

fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Cyclotomic polynomials `Φ_1 .. Φ_max`, index `k - 1`.
fn cyclotomics(max: usize) -> Vec<Poly> {
    let mut out: Vec<Poly> = Vec::with_capacity(max);
    for n in 1..=max {
        let mut p = &Poly::monomial(Rat::one(), n) - &Poly::one();
        for d in 1..n {
            if n % d == 0 {
                p = p.div_rem(&out[d - 1]).0;
            }
        }
        out.push(p);
    }
    out
}

/// Multiplicative order of `E`, or `None` when `E` has infinite order.
///
/// `E` has finite order exactly when its minimal polynomial is squarefree
/// and a product of cyclotomic polynomials; the order is then the lcm of
/// their indices.
pub fn holonomy_order(e: &RatMat) -> Result<Option<u64>> {
    require_integer_square(e)?;
    let d = e.rows() as u64;
    let mut rest = min_poly(e)?;
    if !rest.is_squarefree() {
        return Ok(None);
    }
    // φ(k) ≥ sqrt(k/2), so every relevant index is below 2d² + 2.
    let max = (2 * d * d + 2) as usize;
    let mut order = 1u64;
    for (i, phi) in cyclotomics(max).iter().enumerate() {
        let k = (i + 1) as u64;
        if euler_phi(k) > d {
            continue;
        }
        if phi.divides(&rest) {
            rest = rest.div_rem(phi).0;
            order = order.lcm(&k);
        }
    }
    Ok((rest.degree() == Some(0)).then_some(order))
}

// Distinct integer roots of a polynomial with nonzero constant term.
fn integer_roots(p: &Poly) -> Result<Vec<BigInt>> {
    let lcm = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let c0 = (p.coeff(0) * Rat::from_integer(lcm)).to_integer().abs();
    let Some(c0) = c0.to_u64().filter(|c| *c <= 1_000_000_000_000) else {
        return Err(Error::UnsupportedSpectrum(
            "constant term too large to enumerate integer eigenvalues".into(),
        ));
    };
    let mut roots = Vec::new();
    let mut q = 1u64;
    while q * q <= c0 {
        if c0 % q == 0 {
            for r in [q, c0 / q] {
                for s in [BigInt::from(r), -BigInt::from(r)] {
                    if !roots.contains(&s) && p.eval(&Rat::from_integer(s.clone())).is_zero() {
                        roots.push(s);
                    }
                }
            }
        }
        q += 1;
    }
    roots.sort();
    Ok(roots)
}

fn kernel_dim(m: &RatMat) -> usize {
    m.rows() - m.rank()
}

fn matrix_strings(m: &RatMat) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(ToString::to_string).collect()).collect()
}

/// Splits `A = N ⊕ C` (Fitting decomposition: `N` nilpotent on the
/// generalized kernel, `C` invertible on the image of `A^d`).
fn fitting(a: &RatMat) -> (RatMat, RatMat) {
    let d = a.rows();
    let ad = a.pow(d as u32);
    let ker = ad.kernel();
    let (rref, pivots) = ad.transpose().rref();
    let img: Vec<Vec<Rat>> = (0..pivots.len()).map(|i| rref.row(i).to_vec()).collect();
    let k = ker.len();
    let mut cols = ker;
    cols.extend(img);
    let p = RatMat::from_columns(d, &cols);
    let pinv = p.inverse().expect("Fitting decomposition is direct");
    let b = pinv.matmul(a).matmul(&p);
    (b.block(0, 0, k, k), b.block(k, k, d - k, d - k))
}

// 2cos(2π p/q) for the five denominators where it is an integer.
fn two_cos(k: i64, m: u32) -> Option<i64> {
    let q = m as i64 / k.gcd(&(m as i64));
    match q {
        1 => Some(2),
        2 => Some(-2),
        3 => Some(-1),
        4 => Some(0),
        6 => Some(1),
        _ => None,
    }
}

fn unsupported(msg: String) -> Error {
    Error::UnsupportedSpectrum(msg)
}

/// A rational matrix with the same rational canonical form as `exp(tA)`,
/// together with the spectral data it was built from.
pub fn exp_model(a: &RatMat, time: &SpecialTime) -> Result<(RatMat, SpectralBlockDecomposition)> {
    if !a.is_square() {
        return Err(Error::InvalidInput("A must be square".into()));
    }
    let d = a.rows();
    if let SpecialTime::RationalTime(t) = time {
        if t.is_zero() {
            return Ok((RatMat::identity(d), SpectralBlockDecomposition { blocks: vec![] }));
        }
        if !is_nilpotent(a) {
            return Err(unsupported(
                "exp(tA) for rational t ≠ 0 is only exact when A is nilpotent".into(),
            ));
        }
        let block = if a.is_zero() {
            SpectralBlock::Zero { size: d }
        } else {
            SpectralBlock::Nilpotent {
                size: d,
                matrix: matrix_strings(a),
            }
        };
        return Ok((exp_nilpotent(&a.scale(t))?, SpectralBlockDecomposition { blocks: vec![block] }));
    }

    let (n, c) = fitting(a);
    let mut blocks = Vec::new();
    let mut pieces = Vec::new();
    if n.rows() > 0 {
        // exp(tN) and I + N share their Jordan type for t ≠ 0.
        pieces.push(&RatMat::identity(n.rows()) + &n);
        blocks.push(if n.is_zero() {
            SpectralBlock::Zero { size: n.rows() }
        } else {
            SpectralBlock::Nilpotent {
                size: n.rows(),
                matrix: matrix_strings(&n),
            }
        });
    }
    let r = c.rows();
    if r > 0 {
        let chi = char_poly(&c)?;
        match time {
            SpecialTime::RationalMultipleOfTwoPi(m) => {
                if *m == 0 {
                    return Err(Error::InvalidInput("2π/m needs m > 0".into()));
                }
                if chi.coeffs().iter().skip(1).step_by(2).any(|x| !x.is_zero()) {
                    return Err(unsupported("nonzero eigenvalues are not all purely imaginary".into()));
                }
                let s = Poly::new(chi.coeffs().iter().step_by(2).cloned().collect());
                let mut covered = 0;
                for y in integer_roots(&s)? {
                    if !y.is_negative() {
                        continue;
                    }
                    let Some(k) = isqrt_exact(&-&y).and_then(|k| k.to_i64()) else {
                        continue;
                    };
                    let dim = kernel_dim(&(&c.matmul(&c) + &RatMat::scalar(r, &int(k * k))));
                    let mult = dim / 2;
                    covered += dim;
                    let cos2 = two_cos(k, *m).ok_or_else(|| {
                        unsupported(format!(
                            "2cos(2π·{k}/{m}) is irrational, so exp(tA) has no integer conjugate"
                        ))
                    })?;
                    if cos2.abs() == 2 {
                        pieces.push(RatMat::scalar(dim, &int(cos2.signum())));
                    } else {
                        let q = companion(&Poly::from_i64(&[1, -cos2, 1]))?;
                        pieces.extend(std::iter::repeat_n(q, mult));
                    }
                    blocks.push(SpectralBlock::Rotation {
                        speed: k,
                        multiplicity: mult,
                    });
                }
                if covered != r {
                    return Err(unsupported(
                        "A is not semisimple with eigenvalues in iZ on its image".into(),
                    ));
                }
            }
            SpecialTime::HyperbolicLog(m) => {
                if *m < 3 {
                    return Err(Error::InvalidInput("hyperbolic time needs m ≥ 3".into()));
                }
                let roots = integer_roots(&chi)?;
                let dims: Vec<(i64, usize)> = roots
                    .iter()
                    .map(|k| {
                        let k = k.to_i64().expect("bounded by the constant term");
                        (k, kernel_dim(&(&c - &RatMat::scalar(r, &int(k)))))
                    })
                    .collect();
                if dims.iter().map(|(_, d)| d).sum::<usize>() != r {
                    return Err(unsupported(
                        "A is not diagonalizable with integer eigenvalues on its image".into(),
                    ));
                }
                for &(k, mult) in dims.iter().filter(|(k, _)| *k > 0) {
                    let partner = dims.iter().find(|(j, _)| *j == -k).map_or(0, |(_, d)| *d);
                    if partner != mult {
                        return Err(unsupported(format!(
                            "eigenvalues {k} and {} have different multiplicities",
                            -k
                        )));
                    }
                    // s_j = λ^j + λ^-j with s_0 = 2, s_1 = m.
                    let (mut s0, mut s1) = (BigInt::from(2), BigInt::from(*m));
                    for _ in 1..k {
                        let next = &s1 * *m - &s0;
                        s0 = s1;
                        s1 = next;
                    }
                    let q = companion(&Poly::new(vec![int(1), -Rat::from_integer(s1), int(1)]))?;
                    pieces.extend(std::iter::repeat_n(q, mult));
                    blocks.push(SpectralBlock::Hyperbolic { scale: k, multiplicity: mult });
                }
                if dims.iter().any(|(k, d)| *k < 0 && *d > 0 && !dims.iter().any(|(j, _)| *j == -k)) {
                    return Err(unsupported("negative eigenvalue without a positive partner".into()));
                }
            }
            SpecialTime::RationalTime(_) => unreachable!("handled above"),
        }
    }
    let refs: Vec<&RatMat> = pieces.iter().collect();
    Ok((RatMat::block_diag(&refs), SpectralBlockDecomposition { blocks }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeCertificate {
    pub accepted: bool,
    pub reason: Option<String>,
    pub time: String,
    pub det: String,
    pub char_poly: String,
    pub witness_invariant_factors: Vec<String>,
    pub exp_invariant_factors: Vec<String>,
    pub decomposition: SpectralBlockDecomposition,
}

/// Certifies that `exp(t0 A)` is conjugate over the reals to the integer
/// matrix `E` with `det E = ±1`.
pub fn verify_lattice_witness(a: &RatMat, t0: &SpecialTime, e: &RatMat) -> Result<LatticeCertificate> {
    require_integer_square(e)?;
    if e.rows() != a.rows() {
        return Err(Error::InvalidInput("A and E have different sizes".into()));
    }
    let (model, decomposition) = exp_model(a, t0)?;
    let det = e.determinant()?;
    let fe = invariant_factors(e)?;
    let fm = invariant_factors(&model)?;
    let mut reason = None;
    if !(det.is_one() || (-det.clone()).is_one()) {
        reason = Some(format!("det E = {det} is not ±1"));
    } else if fe != fm {
        reason = Some("invariant factors differ".into());
    }
    Ok(LatticeCertificate {
        accepted: reason.is_none(),
        reason,
        time: t0.to_string(),
        det: det.to_string(),
        char_poly: char_poly(e)?.to_string(),
        witness_invariant_factors: fe.iter().map(ToString::to_string).collect(),
        exp_invariant_factors: fm.iter().map(ToString::to_string).collect(),
        decomposition,
    })
}

/// An invertible rational `P` with `P⁻¹ M1 P = M2`, if one exists.
///
/// Solves `M1 P = P M2` and searches the solution space along a fixed
/// sequence of integer combinations for an invertible element.
pub fn rational_conjugator(m1: &RatMat, m2: &RatMat) -> Result<Option<RatMat>> {
    if !m1.is_square() || m1.rows() != m2.rows() || !m2.is_square() {
        return Err(Error::InvalidInput("expected square matrices of equal size".into()));
    }
    if invariant_factors(m1)? != invariant_factors(m2)? {
        return Ok(None);
    }
    let d = m1.rows();
    // Unknown P[i][j] at index i*d + j; equation row (i, j) of M1 P - P M2.
    let sys = RatMat::from_fn(d * d, d * d, |row, col| {
        let (i, j) = (row / d, row % d);
        let (p, q) = (col / d, col % d);
        let mut v = Rat::zero();
        if q == j {
            v += m1[(i, p)].clone();
        }
        if p == i {
            v -= m2[(q, j)].clone();
        }
        v
    });
    let basis = sys.kernel();
    for round in 0..64i64 {
        let mut p = RatMat::zeros(d, d);
        for (idx, b) in basis.iter().enumerate() {
            let c = int((idx as i64 * 7919 + round * 104_729 + 1) % 11 - 5);
            let m = RatMat::from_fn(d, d, |i, j| b[i * d + j].clone());
            p = &p + &m.scale(&c);
        }
        if !p.determinant()?.is_zero() {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// One row of the flat hyper-Kähler census.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatHKRecord {
    pub name: String,
    pub holonomy_order: u64,
    pub h1: AbelianizationResult,
    #[serde(serialize_with = "ser_mat")]
    pub witness: RatMat,
    pub time: String,
}

fn ser_mat<S: serde::Serializer>(m: &RatMat, s: S) -> std::result::Result<S::Ok, S::Error> {
    matrix_strings(m).serialize(s)
}

/// The matrix `A = 0_3 ⊕ [[0,-1],[1,0]] ⊕ [[0,1],[-1,0]]` of the flat
/// hyper-Kähler algebra in dimension 8.
pub fn flat_hk_a() -> RatMat {
    let r = RatMat::from_i64(&[&[0, -1], &[1, 0]]);
    RatMat::block_diag(&[&RatMat::zeros(3, 3), &r, &r.transpose()])
}

fn blocks(parts: &[RatMat]) -> RatMat {
    let refs: Vec<&RatMat> = parts.iter().collect();
    RatMat::block_diag(&refs)
}

fn id(k: usize) -> RatMat {
    RatMat::identity(k)
}

fn m(rows: &[&[i64]]) -> RatMat {
    RatMat::from_i64(rows)
}

/// The twelve integer matrices, with their times `2π/m` and the expected
/// holonomy and first homology.
pub fn census_witnesses() -> Vec<(&'static str, u32, RatMat, u64, AbelianizationResult)> {
    let l = m(&[&[1, 0], &[1, -1]]);
    let r4 = m(&[&[0, 1], &[-1, 0]]);
    vec![
        ("M1", 1, id(7), 1, AbelianizationResult::new(8, &[])),
        (
            "M2,0",
            2,
            RatMat::diag(&[int(1), int(1), int(1), int(-1), int(-1), int(-1), int(-1)]),
            2,
            AbelianizationResult::new(4, &[2, 2, 2, 2]),
        ),
        ("M2,1", 2, blocks(&[l.clone(), -&id(3), id(2)]), 2, AbelianizationResult::new(4, &[2, 2, 2])),
        (
            "M2,2",
            2,
            blocks(&[l.clone(), l.clone(), -&id(2), id(1)]),
            2,
            AbelianizationResult::new(4, &[2, 2]),
        ),
        (
            "M2,3",
            2,
            blocks(&[l.clone(), l.clone(), l, -&id(1)]),
            2,
            AbelianizationResult::new(4, &[2]),
        ),
        (
            "M3,0",
            3,
            blocks(&[id(3), m(&[&[0, -1], &[1, -1]]), m(&[&[0, 1], &[-1, -1]])]),
            3,
            AbelianizationResult::new(4, &[3, 3]),
        ),
        (
            "M3,1",
            3,
            blocks(&[
                id(2),
                m(&[&[-1, -1], &[1, 0]]),
                m(&[&[0, 0, 1], &[-1, 0, 0], &[0, -1, 0]]),
            ]),
            3,
            AbelianizationResult::new(4, &[3]),
        ),
        (
            "M3,2",
            3,
            blocks(&[
                id(1),
                m(&[&[0, -1, 0], &[0, 0, 1], &[-1, 0, 0]]),
                m(&[&[0, 1, 0], &[0, 0, -1], &[-1, 0, 0]]),
            ]),
            3,
            AbelianizationResult::new(4, &[]),
        ),
        (
            "M4,0",
            4,
            blocks(&[id(3), r4.transpose(), r4.clone()]),
            4,
            AbelianizationResult::new(4, &[2, 2]),
        ),
        (
            "M4,1",
            4,
            blocks(&[id(2), r4, m(&[&[1, 0, 0], &[-1, 0, 1], &[0, -1, 0]])]),
            4,
            AbelianizationResult::new(4, &[2]),
        ),
        (
            "M4,2",
            4,
            blocks(&[
                id(1),
                m(&[
                    &[0, 0, 0, 0, -1, 0],
                    &[0, 0, 0, 0, 0, -1],
                    &[0, 1, 0, 0, 0, 1],
                    &[-1, 0, 0, 0, -1, 0],
                    &[0, 0, 0, 1, 1, 0],
                    &[0, 0, -1, 0, 0, 1],
                ]),
            ]),
            4,
            AbelianizationResult::new(4, &[]),
        ),
        (
            "M6",
            6,
            blocks(&[id(3), m(&[&[0, -1], &[1, 1]]), m(&[&[0, 1], &[-1, 1]])]),
            6,
            AbelianizationResult::new(4, &[]),
        ),
    ]
}

/// Verifies every census witness against `exp(2π/m · A)` and checks its
/// holonomy order and first homology against the expected table.
pub fn flat_hk_census() -> Result<Vec<FlatHKRecord>> {
    let a = flat_hk_a();
    let mut out: Vec<FlatHKRecord> = Vec::new();
    for (name, t, e, hol, h1) in census_witnesses() {
        let mismatch = |detail: String| Error::CensusMismatch {
            record: name.to_string(),
            detail,
        };
        let time = SpecialTime::RationalMultipleOfTwoPi(t);
        let cert = verify_lattice_witness(&a, &time, &e)?;
        if !cert.accepted {
            return Err(mismatch(cert.reason.unwrap_or_default()));
        }
        let got_hol = holonomy_order(&e)?.ok_or_else(|| mismatch("infinite order".into()))?;
        if got_hol != hol {
            return Err(mismatch(format!("holonomy order {got_hol}, expected {hol}")));
        }
        let got = abelianization(&e)?;
        if got != h1 {
            return Err(mismatch(format!("H1 = {got}, expected {h1}")));
        }
        if let Some(prev) = out.iter().find(|r| r.holonomy_order == hol && r.h1 == got) {
            return Err(mismatch(format!("same invariants as {}", prev.name)));
        }
        out.push(FlatHKRecord {
            name: name.to_string(),
            holonomy_order: got_hol,
            h1: got,
            witness: e,
            time: time.to_string(),
        });
    }
    Ok(out)
}

/// The action of the nilpotent 8-dimensional algebra: `e1, e2, e3` map to
/// the last three basis vectors of the ideal.
pub fn g3_a() -> RatMat {
    let mut a = RatMat::zeros(7, 7);
    for i in 0..3 {
        a[(4 + i, i)] = int(1);
    }
    a
}

/// `E_k = exp(kA)` for the nilpotent algebra, and its abelianization
/// `Z^5 ⊕ (Z_k)^3`.
pub fn g3_lattice(k: u64) -> Result<(RatMat, AbelianizationResult)> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be positive".into()));
    }
    let e = exp_nilpotent(&g3_a().scale(&Rat::from_integer(k.into())))?;
    let ab = abelianization(&e)?;
    Ok((e, ab))
}

/// The diagonal action `diag(0, 0, 0, 1, -1, ..., 1, -1)` of size `8n + 3`.
pub fn example62_a(n: usize) -> RatMat {
    let mut d = vec![int(0); 3];
    for _ in 0..4 * n {
        d.push(int(1));
        d.push(int(-1));
    }
    RatMat::diag(&d)
}

/// `E_m = I_3 ⊕ 4n copies of [[0,-1],[1,m]]`, certified against
/// `exp(t_m A)` with `e^t + e^-t = m`, and its abelianization.
pub fn example62_lattice(n: usize, m: i64) -> Result<(RatMat, AbelianizationResult)> {
    if n == 0 || m < 3 {
        return Err(Error::InvalidInput("need n ≥ 1 and m ≥ 3".into()));
    }
    let block = RatMat::from_i64(&[&[0, -1], &[1, m]]);
    let mut parts = vec![id(3)];
    parts.extend(std::iter::repeat_n(block, 4 * n));
    let e = blocks(&parts);
    let cert = verify_lattice_witness(&example62_a(n), &SpecialTime::HyperbolicLog(m), &e)?;
    if !cert.accepted {
        return Err(Error::Inconsistent(format!(
            "E_{m} is not conjugate to exp(t A): {}",
            cert.reason.unwrap_or_default()
        )));
    }
    let ab = abelianization(&e)?;
    Ok((e, ab))
}

/// Pairs `(k, j)` with `0 ≤ k ≤ kmax`, `0 ≤ j ≤ jmax`, `k + j > 0` and
/// `4k = 3j`: the exponents for which `(e^t)^k (e^{-3t/4})^j = 1` can hold
/// with `t ≠ 0`.
pub fn nonexistence_exponent_check(kmax: u32, jmax: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for k in 0..=kmax {
        for j in 0..=jmax {
            if k + j > 0 && 4 * k == 3 * j {
                out.push((k, j));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_times() {
        assert_eq!("2pi/3".parse::<SpecialTime>().unwrap(), SpecialTime::RationalMultipleOfTwoPi(3));
        assert_eq!("pi/2".parse::<SpecialTime>().unwrap(), SpecialTime::RationalMultipleOfTwoPi(4));
        assert_eq!("pi".parse::<SpecialTime>().unwrap(), SpecialTime::RationalMultipleOfTwoPi(2));
        assert_eq!("hyperbolic:5".parse::<SpecialTime>().unwrap(), SpecialTime::HyperbolicLog(5));
        assert_eq!("1/2".parse::<SpecialTime>().unwrap(), SpecialTime::RationalTime(Rat::new(1.into(), 2.into())));
        assert!("2pi/0".parse::<SpecialTime>().is_err());
    }

    #[test]
    fn cyclotomic_table() {
        let c = cyclotomics(12);
        assert_eq!(c[5], Poly::from_i64(&[1, -1, 1]));
        assert_eq!(c[11], Poly::from_i64(&[1, 0, -1, 0, 1]));
        assert_eq!(euler_phi(12), 4);
    }

    #[test]
    fn abelianization_display() {
        assert_eq!(AbelianizationResult::new(4, &[2, 2, 3]).to_string(), "Z^4 + (Z_2)^2 + Z_3");
    }

    #[test]
    fn infinite_order() {
        let e = RatMat::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(holonomy_order(&e).unwrap(), None);
        let j = RatMat::from_i64(&[&[1, 1], &[0, 1]]);
        assert_eq!(holonomy_order(&j).unwrap(), None);
    }
}
