//! Independent numeric oracles: certified MZV evaluation, brute-force lattice
//! summation with rigorous tail bounds, and double-exponential quadrature for
//! small simplex integrals.

pub mod brute;
pub mod fixed;
pub mod mzv_eval;
pub mod quad;

pub use brute::{brute_force_bigzeta, brute_force_shifted};
pub use fixed::{pi, Certified};
pub use mzv_eval::{
    combination_f64, combinations_agree, combinations_equal_numeric, eval_combination, eval_mzv,
};
pub use quad::{quadrature_brown, quadrature_log_brown};

/// A numeric value with an absolute error bound. For certified computations
/// the bound is rigorous; quadrature reports an estimate.
#[derive(Clone, Debug)]
pub struct NumericValue {
    pub value: Certified,
    pub error: f64,
}

impl NumericValue {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}
