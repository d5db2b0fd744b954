//! The eight-dimensional hypercomplex almost abelian algebras.
//!
//! Every such algebra is isomorphic to exactly one of
//!
//! | tag            | brackets (basis `e0, e1, e2, e3, f0, f1, f2, f3`)             |
//! |----------------|----------------------------------------------------------------|
//! | `g1`           | `[e0, fi] = fi`                                                |
//! | `g2(λ)`        | `[e0, ea] = ea`, `[e0, fi] = λ fi`                             |
//! | `g3`           | `[e0, ea] = fa`                                                |
//! | `g4`           | `[e0, ea] = ea + fa`, `[e0, fi] = fi`                          |
//! | `g5`           | `[e0, f0] = f1`, `[e0, f1] = -f0`, `[e0, f2] = -f3`, `[e0, f3] = f2` |
//! | `g6(s)`        | `g5` rotation scaled by `s` plus the identity on `h`           |
//! | `g7(λ, s)`     | `[e0, ea] = ea` plus `λ I + s·(g5 rotation)` on `h`            |
//!
//! together with the abelian algebra, which carries the trivial action.
//! `s` is always positive and is stored through `s²`, which is rational for
//! rational input.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::matrix::RatMat;
use crate::exact::rat::{int, parse_rat, rat, sqrt_exact, Rat};
use crate::hypercomplex::{canonical_triple, decompose, HypercomplexTriple};
use crate::liealg::{build_almost_abelian, build_hypercomplex_aa, isomorphic_aa, unimodular, AlmostAbelianSpec, LieAlgebra};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FamilyTag {
    Abelian,
    G1,
    G2 { lambda: Rat },
    G3,
    G4,
    G5,
    /// `s = sqrt(s2)`.
    G6 { s2: Rat },
    G7 { lambda: Rat, s2: Rat },
}

fn fmt_s(s2: &Rat) -> String {
    match sqrt_exact(s2) {
        Some(s) => s.to_string(),
        None => format!("sqrt({s2})"),
    }
}

impl FamilyTag {
    pub fn g6(s: Rat) -> Self {
        FamilyTag::G6 { s2: &s * &s }
    }

    pub fn g7(lambda: Rat, s: Rat) -> Self {
        FamilyTag::G7 { lambda, s2: &s * &s }
    }

    pub fn family(&self) -> &'static str {
        match self {
            FamilyTag::Abelian => "abelian",
            FamilyTag::G1 => "g1",
            FamilyTag::G2 { .. } => "g2",
            FamilyTag::G3 => "g3",
            FamilyTag::G4 => "g4",
            FamilyTag::G5 => "g5",
            FamilyTag::G6 { .. } => "g6",
            FamilyTag::G7 { .. } => "g7",
        }
    }

    pub fn lambda(&self) -> Option<&Rat> {
        match self {
            FamilyTag::G2 { lambda } | FamilyTag::G7 { lambda, .. } => Some(lambda),
            _ => None,
        }
    }

    pub fn s_squared(&self) -> Option<&Rat> {
        match self {
            FamilyTag::G6 { s2 } | FamilyTag::G7 { s2, .. } => Some(s2),
            _ => None,
        }
    }

    /// `s` when it is rational.
    pub fn s(&self) -> Option<Rat> {
        self.s_squared().and_then(sqrt_exact)
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyTag::G2 { lambda } => write!(f, "g2({lambda})"),
            FamilyTag::G6 { s2 } => write!(f, "g6({})", fmt_s(s2)),
            FamilyTag::G7 { lambda, s2 } => write!(f, "g7({lambda}, {})", fmt_s(s2)),
            other => write!(f, "{}", other.family()),
        }
    }
}

/// Parses the display form: `g3`, `g2(-3/4)`, `g6(1/2)`, `g7(1, sqrt(2))`,
/// `abelian`.
impl std::str::FromStr for FamilyTag {
    type Err = Error;

    fn from_str(src: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("cannot parse family tag {src:?}"));
        let t: String = src.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
        let (head, args) = match t.split_once('(') {
            Some((h, rest)) => (h.to_string(), Some(rest.strip_suffix(')').ok_or_else(bad)?.to_string())),
            None => (t.clone(), None),
        };
        // `s` may be written as `sqrt(q)`; splitting on the first comma keeps it intact.
        let s2_of = |a: &str| -> Result<Rat> {
            let v = match a.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
                Some(inner) => parse_rat(inner)?,
                None => {
                    let s = parse_rat(a)?;
                    &s * &s
                }
            };
            if v.is_positive() {
                Ok(v)
            } else {
                Err(Error::InvalidInput("s must be positive".into()))
            }
        };
        let args: Vec<String> = match &args {
            Some(a) => a.splitn(2, ',').map(str::to_string).collect(),
            None => Vec::new(),
        };
        Ok(match (head.as_str(), args.as_slice()) {
            ("abelian", []) => FamilyTag::Abelian,
            ("g1", []) => FamilyTag::G1,
            ("g2", [l]) => FamilyTag::G2 { lambda: parse_rat(l)? },
            ("g3", []) => FamilyTag::G3,
            ("g4", []) => FamilyTag::G4,
            ("g5", []) => FamilyTag::G5,
            ("g6", [s]) => FamilyTag::G6 { s2: s2_of(s)? },
            ("g7", [l, s]) => FamilyTag::G7 {
                lambda: parse_rat(l)?,
                s2: s2_of(s)?,
            },
            _ => return Err(bad()),
        })
    }
}

impl Serialize for FamilyTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Decision procedure on a spec of quaternionic dimension 2.
pub fn classify8(spec: &AlmostAbelianSpec) -> Result<FamilyTag> {
    spec.validate()?;
    if spec.n != 2 {
        return Err(Error::InvalidSpec(format!("expected n = 2, got n = {}", spec.n)));
    }
    let b = spec.b_matrix();
    let lambda = b.trace() / int(4);
    let u = &b - &RatMat::scalar(4, &lambda);
    let mu = spec.mu.clone();
    if u.is_zero() {
        if mu != lambda {
            return Ok(if mu.is_zero() {
                FamilyTag::G1
            } else {
                FamilyTag::G2 { lambda: lambda / &mu }
            });
        }
        // B - μI = 0 here, so v cannot be normalized away.
        let v_zero = spec.v_is_zero();
        return Ok(match (mu.is_zero(), v_zero) {
            (true, true) => FamilyTag::Abelian,
            (true, false) => FamilyTag::G3,
            (false, true) => FamilyTag::G2 { lambda: Rat::one() },
            (false, false) => FamilyTag::G4,
        });
    }
    // U² = -s² I on h.
    let s2 = rotation_speed_squared(spec);
    Ok(if mu.is_zero() && lambda.is_zero() {
        FamilyTag::G5
    } else if mu.is_zero() {
        FamilyTag::G6 { s2: s2 / (&lambda * &lambda) }
    } else {
        FamilyTag::G7 {
            lambda: lambda / &mu,
            s2: s2 / (&mu * &mu),
        }
    })
}

/// `s²` of `B - λI` before normalization.
pub fn rotation_speed_squared(spec: &AlmostAbelianSpec) -> Rat {
    let b = spec.b_matrix();
    let m = b.rows();
    let u = &b - &RatMat::scalar(m, &(b.trace() / int(m as i64)));
    -u.matmul(&u).trace() / int(m as i64)
}

/// Classifies a raw `7×7` action `A` on `span(e1, ..., e7)`, after reading
/// off the block data with the canonical triple.
pub fn classify8_matrix(a: &RatMat) -> Result<(FamilyTag, AlmostAbelianSpec)> {
    if a.rows() != 7 || a.cols() != 7 {
        return Err(Error::InvalidInput("expected a 7x7 matrix".into()));
    }
    let l = build_almost_abelian(a)?;
    let t = canonical_triple(2);
    let u: Vec<Vec<Rat>> = crate::liealg::standard_basis(8).into_iter().skip(1).collect();
    let report = decompose(&l, &t, &u).map_err(|e| match e {
        Error::NotHypercomplex(msg) => Error::InvalidSpec(format!("not in quaternionic block form: {msg}")),
        other => other,
    })?;
    Ok((classify8(&report.spec)?, report.spec))
}

/// A representative spec for the tag.
pub fn family_spec(tag: &FamilyTag) -> Result<AlmostAbelianSpec> {
    let mut s = AlmostAbelianSpec::scalar(2, Rat::zero());
    let one = || RatMat::from_i64(&[&[1]]);
    let c = |r: &Rat| RatMat::scalar(1, r);
    let rational_s = |s2: &Rat| -> Result<Rat> {
        if !s2.is_positive() {
            return Err(Error::InvalidSpec("s must be positive".into()));
        }
        sqrt_exact(s2).ok_or_else(|| {
            Error::InvalidSpec(format!("s = sqrt({s2}) is irrational; no rational representative"))
        })
    };
    match tag {
        FamilyTag::Abelian => {}
        FamilyTag::G1 => s.x = one(),
        FamilyTag::G2 { lambda } => {
            s.mu = Rat::one();
            s.x = c(lambda);
        }
        FamilyTag::G3 => s.v0[0] = Rat::one(),
        FamilyTag::G4 => {
            s.mu = Rat::one();
            s.x = one();
            s.v0[0] = Rat::one();
        }
        FamilyTag::G5 => s.y = one(),
        FamilyTag::G6 { s2 } => {
            s.x = one();
            s.y = c(&rational_s(s2)?);
        }
        FamilyTag::G7 { lambda, s2 } => {
            s.mu = Rat::one();
            s.x = c(lambda);
            s.y = c(&rational_s(s2)?);
        }
    }
    Ok(s)
}

/// The algebra of the tag with its canonical triple.
pub fn family_algebra(tag: &FamilyTag) -> Result<(LieAlgebra, HypercomplexTriple)> {
    build_hypercomplex_aa(&family_spec(tag)?)
}

/// Description of the unimodular members, `3μ + 4λ = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum UnimodularPattern {
    Exact(FamilyTag),
    /// `g7(-3/4, s)` for every `s > 0`.
    G7AnyS { lambda: String },
}

impl UnimodularPattern {
    pub fn matches(&self, tag: &FamilyTag) -> bool {
        match (self, tag) {
            (UnimodularPattern::Exact(t), other) => t == other,
            (UnimodularPattern::G7AnyS { .. }, FamilyTag::G7 { lambda, .. }) => *lambda == rat(-3, 4),
            _ => false,
        }
    }
}

pub fn unimodular_families() -> Vec<UnimodularPattern> {
    vec![
        UnimodularPattern::Exact(FamilyTag::G2 { lambda: rat(-3, 4) }),
        UnimodularPattern::Exact(FamilyTag::G3),
        UnimodularPattern::Exact(FamilyTag::G5),
        UnimodularPattern::G7AnyS {
            lambda: "-3/4".into(),
        },
    ]
}

pub fn is_unimodular_tag(tag: &FamilyTag) -> bool {
    *tag == FamilyTag::Abelian || unimodular_families().iter().any(|p| p.matches(tag))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Admissibility {
    Admits,
    Rejects,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeVerdict {
    pub verdict: Admissibility,
    pub reason: String,
}

/// Whether the simply connected group of the tag has lattices.
pub fn lattice_admissibility(tag: &FamilyTag) -> Result<LatticeVerdict> {
    use crate::lattices::{flat_hk_a, g3_lattice, verify_lattice_witness, SpecialTime};
    let (verdict, reason) = match tag {
        FamilyTag::Abelian => (Admissibility::Admits, "abelian: Z^8".to_string()),
        FamilyTag::G3 => {
            let (_, ab) = g3_lattice(1)?;
            (
                Admissibility::Admits,
                format!("nilpotent with rational structure constants; witness E = exp(A), H1 = {ab}"),
            )
        }
        FamilyTag::G5 => {
            let e = RatMat::identity(7);
            let cert = verify_lattice_witness(&flat_hk_a(), &SpecialTime::RationalMultipleOfTwoPi(1), &e)?;
            if !cert.accepted {
                return Err(Error::Inconsistent("exp(2πA) should be the identity".into()));
            }
            (Admissibility::Admits, "exp(2πA) = I is integer".to_string())
        }
        t if !is_unimodular_tag(t) => (Admissibility::Rejects, "not unimodular".to_string()),
        _ => (
            Admissibility::Rejects,
            "char poly of exp(t0 A) would be irreducible with a triple root e^t0".to_string(),
        ),
    };
    Ok(LatticeVerdict { verdict, reason })
}

/// Classification with its isomorphism witness: `c·A_input` is conjugate
/// to `A` of the representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassifyReport {
    pub family: String,
    pub tag: FamilyTag,
    pub lambda: Option<String>,
    pub s: Option<String>,
    pub unimodular: bool,
    pub lattices: Admissibility,
    /// `c` with `c·A` conjugate to the representative, when rational.
    pub witness_scalar: Option<String>,
}

pub fn classify_report(spec: &AlmostAbelianSpec) -> Result<ClassifyReport> {
    let tag = classify8(spec)?;
    let (l, _) = build_hypercomplex_aa(spec)?;
    let witness = match family_spec(&tag) {
        Ok(rep) => {
            let c = isomorphic_aa(&spec.a_matrix(), &rep.a_matrix());
            // g5 is reached by rescaling with 1/s, which may be irrational.
            let irrational_scale = tag == FamilyTag::G5 && sqrt_exact(&rotation_speed_squared(spec)).is_none();
            if c.is_none() && !irrational_scale {
                return Err(Error::Inconsistent(format!("input is not isomorphic to the {tag} representative")));
            }
            c.map(|c| c.to_string())
        }
        Err(_) => None,
    };
    debug_assert_eq!(unimodular(&l), is_unimodular_tag(&tag));
    Ok(ClassifyReport {
        family: tag.family().to_string(),
        lambda: tag.lambda().map(ToString::to_string),
        s: tag.s_squared().map(fmt_s),
        unimodular: unimodular(&l),
        lattices: lattice_admissibility(&tag)?.verdict,
        witness_scalar: witness,
        tag,
    })
}

/// The tags of the standard sweep `λ ∈ {-3/4, -1/2, 0, 1, 2}`,
/// `s ∈ {1/2, 1, 2}`.
pub fn tag_sweep() -> Vec<FamilyTag> {
    let lambdas = [rat(-3, 4), rat(-1, 2), int(0), int(1), int(2)];
    let ss = [rat(1, 2), int(1), int(2)];
    let mut out = vec![FamilyTag::G1, FamilyTag::G3, FamilyTag::G4, FamilyTag::G5];
    out.extend(lambdas.iter().map(|l| FamilyTag::G2 { lambda: l.clone() }));
    out.extend(ss.iter().map(|s| FamilyTag::g6(s.clone())));
    for l in &lambdas {
        out.extend(ss.iter().map(|s| FamilyTag::g7(l.clone(), s.clone())));
    }
    out
}
