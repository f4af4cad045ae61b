//! Dense univariate polynomials over the rationals.

use super::rational::{rat_i, Rat};
use num_traits::Zero;

/// Univariate polynomial; `coeffs[k]` is the coefficient of `u^k`.
/// The zero polynomial has an empty coefficient list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: Rat) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly { coeffs: vec![c] }
        }
    }

    pub fn one() -> Self {
        Self::constant(rat_i(1))
    }

    /// `u + a`.
    pub fn linear(a: i64) -> Self {
        Poly {
            coeffs: vec![rat_i(a), rat_i(1)],
        }
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports degree 0 by convention of Lemma-style
    /// hypotheses (callers check `is_zero` where the distinction matters).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Rat::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k] += c;
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            out[k] += c;
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, s: &Rat) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }

    /// Taylor coefficients of `p(a + eps)` in `eps`, up to order `order` inclusive.
    pub fn shift_series(&self, a: &Rat, order: usize) -> Vec<Rat> {
        // Horner over truncated series in eps.
        let mut acc = vec![Rat::zero(); order + 1];
        for c in self.coeffs.iter().rev() {
            // acc = acc*(a+eps) + c, truncated.
            let mut next = vec![Rat::zero(); order + 1];
            for k in 0..=order {
                next[k] = &acc[k] * a;
                if k > 0 {
                    next[k] += acc[k - 1].clone();
                }
            }
            next[0] += c;
            acc = next;
        }
        acc
    }
}
