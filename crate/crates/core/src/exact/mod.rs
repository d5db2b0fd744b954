//! Exact rational and integer linear algebra.

pub mod canonical;
pub mod matrix;
pub mod poly;
pub mod rat;
pub mod snf;
pub mod sparse;

pub use canonical::{
    char_poly, companion, conjugate_over_field, exp_nilpotent, invariant_factors, is_nilpotent,
    min_poly, rational_canonical_form,
};
pub use matrix::RatMat;
pub use poly::{IntPoly, Poly};
pub use rat::{int, parse_rat, rat, sqrt_exact, Rat};
pub use snf::{snf, SnfResult};
