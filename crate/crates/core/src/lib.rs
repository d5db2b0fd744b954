//! Exact computations on hypercomplex almost abelian Lie algebras.
//!
//! Everything is done over arbitrary-precision rationals: building the
//! algebras and their quaternionic triples, Obata, Levi-Civita and Bismut
//! connections, the dimension-8 classification, lattice witnesses and
//! abelianizations, Chevalley–Eilenberg Betti numbers, and tangent lifts
//! carrying Clifford structures.

pub mod error;
pub mod exact;

pub use error::{Error, Result};
pub mod classify;
pub mod cohomology;
pub mod connections;
pub mod hypercomplex;
pub mod lattices;
pub mod liealg;
pub mod lifts;
