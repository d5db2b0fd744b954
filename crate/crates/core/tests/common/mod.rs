#![allow(dead_code)]

use hcaa::exact::{rat, Rat, RatMat};
use hcaa::liealg::AlmostAbelianSpec;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rational in [-3, 3] with denominator 1, 2 or 3; zero a third of the time.
pub fn small_rat(r: &mut ChaCha8Rng) -> Rat {
    if r.gen_range(0..3) == 0 {
        return rat(0, 1);
    }
    let d = r.gen_range(1..=3i64);
    rat(r.gen_range(-3 * d..=3 * d), d)
}

fn mat(r: &mut ChaCha8Rng, m: usize) -> RatMat {
    RatMat::from_fn(m, m, |_, _| small_rat(r))
}

fn skew(r: &mut ChaCha8Rng, m: usize) -> RatMat {
    let a = mat(r, m);
    &a - &a.transpose()
}

fn sym(r: &mut ChaCha8Rng, m: usize) -> RatMat {
    let a = mat(r, m);
    &a + &a.transpose()
}

/// A random spec with `n <= 3`. Roughly half of them are drawn from the
/// HKT shape (`v0 = 0`, `B` skew); the rest are generic, with `v0` or the
/// symmetric part of `B` perturbed.
pub fn random_spec(r: &mut ChaCha8Rng) -> AlmostAbelianSpec {
    let n = r.gen_range(1..=3usize);
    let m = n - 1;
    let mu = small_rat(r);
    let hkt_shape = r.gen_bool(0.5);
    let (x, y, z, w) = if hkt_shape || r.gen_bool(0.5) {
        (skew(r, m), sym(r, m), sym(r, m), sym(r, m))
    } else {
        (mat(r, m), mat(r, m), mat(r, m), mat(r, m))
    };
    let v0 = if hkt_shape || r.gen_bool(0.3) {
        vec![rat(0, 1); 4 * m]
    } else {
        (0..4 * m).map(|_| small_rat(r)).collect()
    };
    AlmostAbelianSpec::new(n, mu, v0, x, y, z, w).expect("well-formed blocks")
}

/// `v0 = 0`, `B` skew, with the given `mu`, of quaternionic dimension 2.
pub fn hkt_spec(mu: Rat) -> AlmostAbelianSpec {
    let one = RatMat::from_i64(&[&[1]]);
    let zero = RatMat::zeros(1, 1);
    AlmostAbelianSpec::new(2, mu, vec![rat(0, 1); 4], zero.clone(), one, zero.clone(), zero).unwrap()
}
