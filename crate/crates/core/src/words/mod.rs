//! Iterated integrals of singular 1-forms over the simplex
//! `0 < t_1 < ... < t_N < 1`, with a convergence test and two independent
//! reduction algorithms that must agree:
//!
//! - [`reduce_word_series`]: geometric/binomial series expansion of every pole
//!   letter, conversion to a nested chain sum, reduction through the series
//!   engine;
//! - [`reduce_word_integral`]: two-sided antiderivative elimination of letters
//!   until only the classical alphabet `{dt/t, dt/(1-t)}` remains.
//!
//! The letter alphabet is `t^m dt/t` and `t^n dt/(1-t)^l`; [`normalize_word`]
//! rewrites any word over the restricted generators `{t^m dt/t, dt/(1-t)^l}`.

mod integral_route;
mod series_route;

use crate::error::WordError;
use crate::exact::rational::{rat_i, Rat};
use crate::mzv::{MzvCombination, MzvIndex};
use num_traits::Zero;
use std::collections::BTreeMap;

/// A 1-form letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum DifferentialForm {
    /// `t^m dt/t`.
    Power { m: i64 },
    /// `t^n dt/(1-t)^l`, `l >= 1`.
    Pole { n: i64, l: u32 },
}

impl DifferentialForm {
    pub fn power(m: i64) -> Self {
        DifferentialForm::Power { m }
    }

    pub fn pole(n: i64, l: u32) -> Self {
        assert!(l >= 1, "pole order must be >= 1");
        DifferentialForm::Pole { n, l }
    }
}

/// A word of 1-form letters, read innermost (nearest 0) first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordIntegral {
    letters: Vec<DifferentialForm>,
}

impl WordIntegral {
    pub fn new(letters: Vec<DifferentialForm>) -> Option<Self> {
        if letters.is_empty() {
            return None;
        }
        for l in &letters {
            if let DifferentialForm::Pole { l, .. } = l {
                if *l == 0 {
                    return None;
                }
            }
        }
        Some(WordIntegral { letters })
    }

    pub fn letters(&self) -> &[DifferentialForm] {
        &self.letters
    }

    /// Number of letters (always at least one).
    pub fn len(&self) -> usize {
        self.letters.len()
    }
}

/// Internal single-monomial letter: `t^m dt` or `dt/(1-t)^l`.
/// `dt/t` is `T(-1)`, `dt/(1-t)` is `P(1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Mon {
    T(i64),
    P(u32),
}

impl Mon {
    fn to_form(self) -> DifferentialForm {
        match self {
            Mon::T(j) => DifferentialForm::Power { m: j + 1 },
            Mon::P(l) => DifferentialForm::Pole { n: 0, l },
        }
    }
}

/// A finite sum `sum c * t^m / (1-t)^l`, the function class closed under the
/// antiderivative recursion.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UnivariateFactor {
    terms: BTreeMap<(i64, u32), Rat>,
}

impl UnivariateFactor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: i64, l: u32, c: Rat) -> Self {
        let mut f = Self::zero();
        f.add_term(m, l, c);
        f
    }

    pub fn add_term(&mut self, m: i64, l: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((m, l)).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(m, l));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, u32), &Rat)> {
        self.terms.iter()
    }

    pub fn mul(&self, other: &UnivariateFactor) -> UnivariateFactor {
        let mut out = UnivariateFactor::zero();
        for ((m1, l1), c1) in &self.terms {
            for ((m2, l2), c2) in &other.terms {
                out.add_term(m1 + m2, l1 + l2, c1 * c2);
            }
        }
        out
    }

    /// Split every mixed term `t^m/(1-t)^l` into pure monomials `t^j` and
    /// `(1-t)^{-l}` by partial fractions at 0 and 1.
    pub(crate) fn split_monomials(&self) -> Vec<(Rat, Mon)> {
        let mut acc: BTreeMap<Mon, Rat> = BTreeMap::new();
        for ((m, l), c) in &self.terms {
            split_rec(*m, *l, c.clone(), &mut acc);
        }
        acc.into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (c, m))
            .collect()
    }
}

fn split_rec(m: i64, l: u32, c: Rat, acc: &mut BTreeMap<Mon, Rat>) {
    if c.is_zero() {
        return;
    }
    if l == 0 {
        *acc.entry(Mon::T(m)).or_insert_with(Rat::zero) += c;
        return;
    }
    if m == 0 {
        *acc.entry(Mon::P(l)).or_insert_with(Rat::zero) += c;
        return;
    }
    if m > 0 {
        // t^m/(1-t)^l = t^{m-1}/(1-t)^l - t^{m-1}/(1-t)^{l-1}
        split_rec(m - 1, l, c.clone(), acc);
        split_rec(m - 1, l - 1, -c, acc);
    } else {
        // t^m/(1-t)^l = t^m/(1-t)^{l-1} + t^{m+1}/(1-t)^l
        split_rec(m, l - 1, c.clone(), acc);
        split_rec(m + 1, l, c, acc);
    }
}

/// Expand a word over the full alphabet into a combination of words over the
/// restricted generators `{t^m dt/t, dt/(1-t)^l}` with pointwise identical
/// weighted integrand sum.
pub fn normalize_word(letters: &[DifferentialForm]) -> Vec<(Rat, WordIntegral)> {
    normalize_to_mons(letters)
        .into_iter()
        .map(|(c, mons)| {
            let w = WordIntegral::new(mons.iter().map(|m| m.to_form()).collect())
                .expect("nonempty restricted word");
            (c, w)
        })
        .collect()
}

pub(crate) fn normalize_to_mons(letters: &[DifferentialForm]) -> Vec<(Rat, Vec<Mon>)> {
    let mut acc: Vec<(Rat, Vec<Mon>)> = vec![(rat_i(1), Vec::new())];
    for letter in letters {
        let options: Vec<(Rat, Mon)> = match letter {
            DifferentialForm::Power { m } => vec![(rat_i(1), Mon::T(m - 1))],
            DifferentialForm::Pole { n, l } => {
                UnivariateFactor::monomial(*n, *l, rat_i(1)).split_monomials()
            }
        };
        let mut next = Vec::with_capacity(acc.len() * options.len());
        for (c, w) in &acc {
            for (c2, m) in &options {
                let mut w2 = w.clone();
                w2.push(*m);
                next.push((c * c2, w2));
            }
        }
        acc = next;
    }
    // Merge identical words.
    let mut merged: BTreeMap<Vec<Mon>, Rat> = BTreeMap::new();
    for (c, w) in acc {
        let e = merged.entry(w).or_insert_with(Rat::zero);
        *e += c;
    }
    merged
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(w, c)| (c, w))
        .collect()
}

/// Block/series data of a restricted word.
pub(crate) struct WordShape {
    /// Cumulative power-letter exponent sum at each position.
    pub m: Vec<i64>,
    /// Number of pole letters at or before each position.
    pub s: Vec<usize>,
    /// Pole positions (0-based).
    pub poles: Vec<usize>,
    /// Pole orders.
    pub orders: Vec<u32>,
}

pub(crate) fn word_shape(word: &[Mon]) -> WordShape {
    let n = word.len();
    let mut m = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n);
    let mut poles = Vec::new();
    let mut orders = Vec::new();
    let mut acc_m = 0i64;
    for (i, letter) in word.iter().enumerate() {
        match letter {
            Mon::T(j) => acc_m += j + 1,
            Mon::P(l) => {
                poles.push(i);
                orders.push(*l);
            }
        }
        m.push(acc_m);
        s.push(poles.len());
    }
    WordShape { m, s, poles, orders }
}

/// Convergence of a restricted word, from its series form: every position
/// needs `M_i + s(i) >= 1` (no lattice pole, integrable at 0), and the block
/// degree chain must hold with strict suffix margins.
pub(crate) fn convergent_restricted(word: &[Mon]) -> bool {
    let shape = word_shape(word);
    let n = word.len();
    for i in 0..n {
        if shape.m[i] + (shape.s[i] as i64) < 1 {
            return false;
        }
    }
    let r = shape.poles.len();
    if r == 0 {
        return true;
    }
    // suffix sums of (block size - pole order) must stay >= 1
    let mut suffix = 0i64;
    for q in (0..r).rev() {
        let end = if q + 1 < r { shape.poles[q + 1] } else { n };
        let block = (end - shape.poles[q]) as i64;
        suffix += block - shape.orders[q] as i64;
        if suffix < 1 {
            return false;
        }
    }
    true
}

/// Convergence of a word over the full alphabet: normalize first, then
/// require every restricted component to converge.
pub fn word_convergent(w: &WordIntegral) -> bool {
    normalize_to_mons(w.letters())
        .iter()
        .all(|(_, mons)| convergent_restricted(mons))
}

/// Reduce by series expansion (binomial expansion of the pole letters and the
/// chain-series engine).
pub fn reduce_word_series(w: &WordIntegral) -> Result<MzvCombination, WordError> {
    let parts = normalize_to_mons(w.letters());
    if parts.iter().any(|(_, mons)| !convergent_restricted(mons)) {
        return Err(WordError::Divergent);
    }
    let mut out = MzvCombination::zero();
    for (c, mons) in parts {
        out.add_assign(&series_route::reduce_restricted(&mons, c)?);
    }
    Ok(out)
}

/// Reduce by two-sided antiderivative elimination down to classical words.
pub fn reduce_word_integral(w: &WordIntegral) -> Result<MzvCombination, WordError> {
    let parts = normalize_to_mons(w.letters());
    if parts.iter().any(|(_, mons)| !convergent_restricted(mons)) {
        return Err(WordError::Divergent);
    }
    integral_route::reduce(parts)
}

/// Parse a classical word over `{dt/t, dt/(1-t)}` into its MZV index.
/// Returns None for divergent classical words.
pub(crate) fn classical_index(word: &[Mon]) -> Option<MzvIndex> {
    if word.is_empty() {
        return Some(MzvIndex::empty());
    }
    if word[0] != Mon::P(1) || *word.last().unwrap() != Mon::T(-1) {
        return None;
    }
    let mut parts: Vec<u32> = Vec::new();
    for letter in word {
        match letter {
            Mon::P(1) => parts.push(1),
            Mon::T(-1) => *parts.last_mut().unwrap() += 1,
            _ => return None,
        }
    }
    MzvIndex::new(parts)
}
