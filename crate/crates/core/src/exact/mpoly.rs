//! Sparse multivariate polynomials over the rationals.
//!
//! Used as numerators of nested lattice sums. Variables are positional; every
//! exponent vector is kept at the ambient length.

use super::poly::Poly;
use super::rational::{rat_i, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, rat_i(1))
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, rat_i(1));
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&vec![0; self.nvars])
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rat) {
        debug_assert_eq!(exps.len(), self.nvars);
        let entry = self.terms.entry(exps).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            // re-borrow to remove
            let key: Vec<u32> = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .unwrap();
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> MPoly {
        if s.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn deg_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Split as `self = lo + x_var * hi`.
    pub fn split_var(&self, var: usize) -> (MPoly, MPoly) {
        let mut lo = MPoly::zero(self.nvars);
        let mut hi = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                lo.add_term(e.clone(), c.clone());
            } else {
                let mut e2 = e.clone();
                e2[var] -= 1;
                hi.add_term(e2, c.clone());
            }
        }
        (lo, hi)
    }

    /// Substitute a polynomial for one variable.
    pub fn substitute(&self, var: usize, value: &MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, value.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut term = MPoly::constant(self.nvars, c.clone());
            let mut base = e.clone();
            let pow = base[var];
            base[var] = 0;
            let mut mono = MPoly::zero(self.nvars);
            mono.add_term(base, rat_i(1));
            term = term.mul(&mono);
            for _ in 0..pow {
                term = term.mul(value);
            }
            out = out.add(&term);
        }
        out
    }

    /// Drop a variable that no term uses, renumbering the remaining variables.
    pub fn remove_unused_var(&self, var: usize) -> MPoly {
        debug_assert_eq!(self.deg_in(var), 0);
        let mut out = MPoly::zero(self.nvars - 1);
        for (e, c) in &self.terms {
            let mut e2 = Vec::with_capacity(self.nvars - 1);
            for (i, &x) in e.iter().enumerate() {
                if i != var {
                    e2.push(x);
                }
            }
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Append fresh variables at the end.
    pub fn extend_vars(&self, extra: usize) -> MPoly {
        let mut out = MPoly::zero(self.nvars + extra);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2.extend(std::iter::repeat(0).take(extra));
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Reorder variables: new variable `i` is old variable `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> MPoly {
        debug_assert_eq!(perm.len(), self.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let e2: Vec<u32> = perm.iter().map(|&old| e[old]).collect();
            out.add_term(e2, c.clone());
        }
        out
    }

    /// View a univariate polynomial in `var` with MPoly coefficients:
    /// returns `[p_0, p_1, ...]` with `self = sum_k x_var^k p_k`.
    pub fn as_univariate(&self, var: usize) -> Vec<MPoly> {
        let d = self.deg_in(var) as usize;
        let mut out = vec![MPoly::zero(self.nvars); d + 1];
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            let mut e2 = e.clone();
            e2[var] = 0;
            out[k].add_term(e2, c.clone());
        }
        out
    }

    /// Evaluate fully at integer points.
    pub fn eval_ints(&self, xs: &[i64]) -> Rat {
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &p) in e.iter().enumerate() {
                for _ in 0..p {
                    t *= rat_i(xs[i]);
                }
            }
            acc += t;
        }
        acc
    }

    /// Lift a univariate `Poly` into variable `var` of an `nvars`-variable MPoly.
    pub fn from_poly(p: &Poly, nvars: usize, var: usize) -> MPoly {
        let mut out = MPoly::zero(nvars);
        for (k, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; nvars];
                e[var] = k as u32;
                out.add_term(e, c.clone());
            }
        }
        out
    }
}
