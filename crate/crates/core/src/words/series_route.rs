//! Series-expansion reduction of restricted words.
//!
//! Each pole letter `dt/(1-t)^l` expands through
//! `1/(1-t)^l = sum_{n>=1} binom(n+l-2, l-1) t^{n-1}`; integrating the
//! resulting monomials over the simplex leaves the nested sum
//!
//! ```text
//! sum_{0 < v_1 < ... < v_r} prod_q binom(v_q - v_{q-1} + l_q - 2, l_q - 1)
//!     * prod_i 1/(v_{s(i)} + M_i)
//! ```
//!
//! with `v_0 = 0`, one chain variable per pole letter, `s(i)` the number of
//! pole letters at or before position i, and `M_i` the cumulative power-letter
//! exponent. Positions before the first pole contribute constant factors
//! `1/M_i`.

use super::{word_shape, Mon};
use crate::error::WordError;
use crate::exact::mpoly::MPoly;
use crate::exact::poly::Poly;
use crate::exact::rational::{factorial, rat_i, Rat};
use crate::mzv::MzvCombination;
use crate::series::chain::{reduce_chain, ChainTerm};
use num_traits::Zero;

/// `binom(g + l - 2, l - 1)` as a polynomial in `g`.
fn binom_poly(l: u32) -> Poly {
    let mut acc = Poly::one();
    for z in 0..l.saturating_sub(1) {
        // factor (g + l - 2 - z)
        acc = acc.mul(&Poly::from_coeffs(vec![
            rat_i(l as i64 - 2 - z as i64),
            rat_i(1),
        ]));
    }
    acc.scale(&(rat_i(1) / factorial(l.saturating_sub(1))))
}

pub(super) fn reduce_restricted(word: &[Mon], coeff: Rat) -> Result<MzvCombination, WordError> {
    let shape = word_shape(word);
    let r = shape.poles.len();
    let n = word.len();

    let mut scalar = coeff;
    // Constant prefix positions (before the first pole).
    let first_pole = shape.poles.first().copied().unwrap_or(n);
    for i in 0..first_pole {
        debug_assert!(shape.m[i] >= 1);
        scalar /= rat_i(shape.m[i]);
    }
    if r == 0 {
        return Ok(MzvCombination::constant(scalar));
    }

    let mut factors: Vec<Vec<(i64, u32)>> = vec![Vec::new(); r];
    for i in first_pole..n {
        let var = shape.s[i] - 1;
        push_factor(&mut factors[var], shape.m[i]);
    }

    // Numerator: product of the binomial polynomials in the gap variables.
    let mut numerator = MPoly::one(r);
    for (q, &l) in shape.orders.iter().enumerate() {
        if l <= 1 {
            continue;
        }
        let p = binom_poly(l);
        let gap = if q == 0 {
            MPoly::var(r, 0)
        } else {
            MPoly::var(r, q).add(&MPoly::var(r, q - 1).scale(&rat_i(-1)))
        };
        let mut comp = MPoly::zero(r);
        let mut pw = MPoly::one(r);
        for c in p.coeffs() {
            if !c.is_zero() {
                comp = comp.add(&pw.scale(c));
            }
            pw = pw.mul(&gap);
        }
        numerator = numerator.mul(&comp);
    }

    let term = ChainTerm::new(scalar, numerator, factors);
    reduce_chain(term).map_err(|e| match e {
        crate::error::SeriesError::Divergent => WordError::Divergent,
        _ => WordError::InternalDivergence("chain reduction of word series"),
    })
}

fn push_factor(list: &mut Vec<(i64, u32)>, shift: i64) {
    for f in list.iter_mut() {
        if f.0 == shift {
            f.1 += 1;
            return;
        }
    }
    list.push((shift, 1));
    list.sort_unstable();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;
    use crate::mzv::MzvIndex;

    fn single(parts: Vec<u32>) -> MzvCombination {
        MzvCombination::single(MzvIndex::new(parts).unwrap(), rat_i(1))
    }

    #[test]
    fn zeta_words() {
        // [dt/(1-t), dt/t] -> zeta(2)
        let c = reduce_restricted(&[Mon::P(1), Mon::T(-1)], rat_i(1)).unwrap();
        assert_eq!(c, single(vec![2]));
        // [dt/(1-t), dt/t, dt/t] -> zeta(3)
        let c = reduce_restricted(&[Mon::P(1), Mon::T(-1), Mon::T(-1)], rat_i(1)).unwrap();
        assert_eq!(c, single(vec![3]));
        // [dt/(1-t), dt/t, dt/(1-t), dt/t] -> zeta(2,2)
        let c = reduce_restricted(
            &[Mon::P(1), Mon::T(-1), Mon::P(1), Mon::T(-1)],
            rat_i(1),
        )
        .unwrap();
        assert_eq!(c, single(vec![2, 2]));
    }

    #[test]
    fn pure_power_word() {
        // t^2 dt/t = t dt: integral = 1/2
        let c = reduce_restricted(&[Mon::T(1)], rat_i(1)).unwrap();
        assert_eq!(c, MzvCombination::constant(rat(1, 2)));
        // t dt then t dt: int_{0<a<b} a b da db = 1/8
        let c = reduce_restricted(&[Mon::T(1), Mon::T(1)], rat_i(1)).unwrap();
        assert_eq!(c, MzvCombination::constant(rat(1, 8)));
    }

    #[test]
    fn double_pole_word() {
        // [dt/(1-t)^2, dt/t, dt/t] -> sum n * n^{-3} = zeta(2)
        let c = reduce_restricted(&[Mon::P(2), Mon::T(-1), Mon::T(-1)], rat_i(1)).unwrap();
        assert_eq!(c, single(vec![2]));
    }

    #[test]
    fn binom_poly_values() {
        let p = binom_poly(3); // binom(g+1, 2) = g(g+1)/2
        assert_eq!(p.eval(&rat_i(3)), rat_i(6));
        let p = binom_poly(1);
        assert_eq!(p.eval(&rat_i(17)), rat_i(1));
    }
}
