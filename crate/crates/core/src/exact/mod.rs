//! Exact arithmetic layer: rationals, univariate and multivariate polynomials,
//! partial fractions, harmonic numbers.

pub mod mpoly;
pub mod pfrac;
pub mod poly;
pub mod rational;

pub use mpoly::MPoly;
pub use pfrac::{harmonic, partial_fraction, PartialFractionTerm, PoleSpec};
pub use poly::Poly;
pub use rational::{binomial, factorial, rat, rat_from_str, rat_i, rat_to_f64, rat_to_string, Rat};
