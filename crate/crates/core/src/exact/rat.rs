//! Arbitrary-precision rationals.
//!
//! `Rat` is `num_rational::BigRational`, which already keeps values in lowest
//! terms with a positive denominator. This module adds the small helpers the
//! rest of the crate leans on: short constructors, the `"p/q"` text form used
//! on the wire, and rational square roots.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = num_rational::BigRational;

/// `p/q` as a rational. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// Parses `"p/q"`, `"p"` or a terminating decimal such as `"-0.75"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::InvalidInput("empty rational".into()));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if t.contains('/') {
            return Err(Error::InvalidInput(format!("malformed rational {s:?}")));
        }
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
            .map_err(|_| Error::InvalidInput(format!("malformed rational {s:?}")))?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rat::new(num, den);
        return Ok(if neg { -r } else { r });
    }
    Rat::from_str(t).map_err(|_| Error::InvalidInput(format!("malformed rational {s:?}")))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn fmt_rat(r: &Rat) -> String {
    r.to_string()
}

/// Exact integer square root, if `n` is a perfect square.
pub fn isqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact nonnegative rational square root, if one exists.
pub fn sqrt_exact(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let num = isqrt_exact(r.numer())?;
    let den = isqrt_exact(r.denom())?;
    Some(Rat::new(num, den))
}

/// Rational `k`-th roots of `r` (zero, one or two of them).
pub fn rational_roots(r: &Rat, k: u32) -> Vec<Rat> {
    if k == 0 {
        return Vec::new();
    }
    if r.is_zero() {
        return vec![Rat::zero()];
    }
    let root_int = |n: &BigInt| -> Option<BigInt> {
        let a = n.abs();
        let c = a.nth_root(k);
        (num_traits::pow(c.clone(), k as usize) == a).then_some(c)
    };
    let (Some(p), Some(q)) = (root_int(r.numer()), root_int(r.denom())) else {
        return Vec::new();
    };
    let base = Rat::new(p, q);
    match (r.is_negative(), k.is_even()) {
        (true, true) => Vec::new(),
        (true, false) => vec![-base],
        (false, true) => vec![base.clone(), -base],
        (false, false) => vec![base],
    }
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

pub fn to_bigint(r: &Rat) -> Option<BigInt> {
    is_integer(r).then(|| r.numer().clone())
}
