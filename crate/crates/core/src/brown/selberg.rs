//! Taylor coefficients of Selberg integrals at integer base points: the
//! log-moment integrals
//!
//! ```text
//! int f * prod t_i^{A_i} (1-t_i)^{B_i} log^{a_i} t_i log^{b_i}(1-t_i)
//!       * prod (t_j-t_i)^{C_ij} log^{c_ij}(t_j-t_i) dt
//! ```
//!
//! reduced exactly to multiple zeta values. Logarithms are rewritten as
//! polylogarithms (`log t = -Li_1(1-t)`, `log(1-t) = -Li_1(t)`,
//! `log(t_j-t_i) = -Li_1(1-(t_j-t_i))`) and routed through
//! [`expand_polylog_integrand`]. The factorial normalization of the Taylor
//! series is left to the caller: the raw log-moment integral is returned.

use super::polylog::{
    expand_polylog_integrand, Anchor, DifferenceFactor, LiWord, PolylogMonomial,
};
use super::{brown_convergent, reduce_brown};
use crate::error::BrownError;
use crate::exact::rational::{rat_i, Rat};
use crate::mzv::MzvCombination;
use std::collections::BTreeMap;

/// A monomial of `Q[t_i, 1/t_i, 1/(t_i - t_j)]`: integer powers of the
/// variables and nonpositive powers of the canonical differences
/// `(t_j - t_i)`, `i < j` (an inverse difference with the opposite
/// orientation carries its sign in the coefficient).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SelbergMonomial {
    pub t_pow: Vec<i64>,
    pub diff_pow: BTreeMap<(usize, usize), i64>,
}

/// Exponent data of a Selberg Taylor coefficient.
#[derive(Clone, Debug)]
pub struct SelbergSpec {
    pub n: usize,
    /// The prefactor f as a sum of monomials.
    pub f: Vec<(Rat, SelbergMonomial)>,
    pub base_a: Vec<i64>,
    pub base_b: Vec<i64>,
    pub base_c: BTreeMap<(usize, usize), i64>,
    /// Orders of the log factors (Taylor orders in alpha_i, beta_i, gamma_ij).
    pub log_a: Vec<u32>,
    pub log_b: Vec<u32>,
    pub log_c: BTreeMap<(usize, usize), u32>,
}

impl SelbergSpec {
    /// Plain base-point spec with f = 1.
    pub fn pure(
        n: usize,
        base_a: Vec<i64>,
        base_b: Vec<i64>,
        base_c: BTreeMap<(usize, usize), i64>,
        log_a: Vec<u32>,
        log_b: Vec<u32>,
        log_c: BTreeMap<(usize, usize), u32>,
    ) -> Option<Self> {
        if base_a.len() != n || base_b.len() != n || log_a.len() != n || log_b.len() != n {
            return None;
        }
        Some(SelbergSpec {
            n,
            f: vec![(
                rat_i(1),
                SelbergMonomial {
                    t_pow: vec![0; n],
                    diff_pow: BTreeMap::new(),
                },
            )],
            base_a,
            base_b,
            base_c,
            log_a,
            log_b,
            log_c,
        })
    }
}

/// The raw log-moment integral of the spec, as an exact combination of
/// multiple zeta values. Convergence of every expanded chamber integrand is
/// required (logarithms never affect strict power counting).
pub fn selberg_taylor_coefficient(spec: &SelbergSpec) -> Result<MzvCombination, BrownError> {
    let n = spec.n;
    let mut out = MzvCombination::zero();
    for (f_coeff, mono) in &spec.f {
        if mono.t_pow.len() != n {
            return Err(BrownError::UnsupportedFactor("monomial arity".into()));
        }
        for (&(i, j), &e) in &mono.diff_pow {
            if i >= j || j >= n || e > 0 {
                return Err(BrownError::UnsupportedFactor(format!(
                    "difference power ({}, {})^{}",
                    i, j, e
                )));
            }
        }
        // Assemble per-variable polylog monomials.
        let mut sign = rat_i(1);
        let mut monomials: Vec<PolylogMonomial> = Vec::with_capacity(n);
        for i in 0..n {
            let total_a = spec.base_a[i] + mono.t_pow[i];
            let mut li = Vec::new();
            // log^{a} t = (-1)^a (Li_1(1-t))^a
            for _ in 0..spec.log_a[i] {
                li.push(LiWord {
                    index: vec![1],
                    anchor: Anchor::AtOne,
                });
            }
            if spec.log_a[i] % 2 == 1 {
                sign = -sign;
            }
            // log^{b}(1-t) = (-1)^b (Li_1(t))^b
            for _ in 0..spec.log_b[i] {
                li.push(LiWord {
                    index: vec![1],
                    anchor: Anchor::AtZero,
                });
            }
            if spec.log_b[i] % 2 == 1 {
                sign = -sign;
            }
            monomials.push(PolylogMonomial {
                laurent: (-total_a, -spec.base_b[i]),
                li_factors: li,
            });
        }
        // Difference data: powers and log powers.
        let mut diff_data: BTreeMap<(usize, usize), (i64, u32)> = BTreeMap::new();
        for (&p, &e) in &spec.base_c {
            diff_data.entry(p).or_insert((0, 0)).0 += e;
        }
        for (&p, &e) in &mono.diff_pow {
            diff_data.entry(p).or_insert((0, 0)).0 += e;
        }
        for (&p, &l) in &spec.log_c {
            diff_data.entry(p).or_insert((0, 0)).1 += l;
            if l % 2 == 1 {
                sign = -sign;
            }
        }
        let diffs: Vec<DifferenceFactor> = diff_data
            .into_iter()
            .filter(|&(_, (e, l))| e != 0 || l != 0)
            .map(|((i, j), (e, l))| DifferenceFactor {
                pair: (i, j),
                power: -e,
                log_power: l,
            })
            .collect();

        let chambers = expand_polylog_integrand(&monomials, &diffs)?;
        for (c, _, integrand) in chambers {
            if !brown_convergent(&integrand) {
                return Err(BrownError::Divergent);
            }
            let reduced = reduce_brown(&integrand)?;
            out.add_assign(&reduced.scale(&(&c * f_coeff * &sign)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;
    use crate::mzv::MzvIndex;

    fn pure_spec(log_a: u32, log_b: u32, base_a: i64, base_b: i64) -> SelbergSpec {
        SelbergSpec::pure(
            1,
            vec![base_a],
            vec![base_b],
            BTreeMap::new(),
            vec![log_a],
            vec![log_b],
            BTreeMap::new(),
        )
        .unwrap()
    }

    #[test]
    fn log_t_moment() {
        // int_0^1 log t dt = -1
        let c = selberg_taylor_coefficient(&pure_spec(1, 0, 0, 0)).unwrap();
        assert_eq!(c, MzvCombination::constant(rat_i(-1)));
    }

    #[test]
    fn log_t_log_one_minus_t_moment() {
        // int_0^1 log t log(1-t) dt = 2 - zeta(2)
        let c = selberg_taylor_coefficient(&pure_spec(1, 1, 0, 0)).unwrap();
        let mut expect = MzvCombination::constant(rat_i(2));
        expect.add_term(MzvIndex::new(vec![2]).unwrap(), rat_i(-1));
        assert_eq!(c, expect);
    }

    #[test]
    fn beta_moment() {
        // base point A=1, B=1, no logs: B(2,2) = 1/6
        let c = selberg_taylor_coefficient(&pure_spec(0, 0, 1, 1)).unwrap();
        assert_eq!(c, MzvCombination::constant(rat(1, 6)));
    }

    #[test]
    fn log_squared_moment() {
        // int_0^1 log^2 t dt = 2
        let c = selberg_taylor_coefficient(&pure_spec(2, 0, 0, 0)).unwrap();
        assert_eq!(c, MzvCombination::constant(rat_i(2)));
    }

    #[test]
    fn divergent_moment() {
        // int t^{-1} log t dt diverges
        let err = selberg_taylor_coefficient(&pure_spec(1, 0, -1, 0)).unwrap_err();
        assert!(matches!(err, BrownError::Divergent));
    }
}
