//! Generalized big zeta values `Z(A, D | c)` and their reduction to multiple
//! zeta values.
//!
//! `Z(A, D | c) = sum_{n in N^d} (D 1/prod_j (sum_i a_ij z_i + c_j))(n)` for a
//! quasi-basic 0/1 matrix A (rows are interval indicators, no zero columns),
//! a rational constant-coefficient differential operator D, and integer
//! shifts c. Provides:
//! - [`QuasiBasicMatrix`], [`validate_quasi_basic`]
//! - [`Chamber`], [`chamber_decompose`]: ordered set partitions of the lattice
//! - [`DiffOperator`], [`BigZetaTerm`]
//! - [`HyperplaneTerm`], [`collapse_identical_rows`]: the rewriting
//!   representation and the identical-row collapse
//! - [`bigzeta_convergent`], [`reduce_bigzeta`]

pub mod chamber;
pub mod engine;

use crate::error::BigZetaError;
use crate::exact::mpoly::MPoly;
use crate::exact::rational::{rat_i, Rat};
use crate::mzv::MzvCombination;
use num_traits::Zero;
use std::collections::BTreeMap;

pub use chamber::{chamber_decompose, Chamber};
pub use engine::{collapse_identical_group, Form, HyperplaneTerm};

/// A 0/1 matrix whose rows are meant to be positive A_w-roots (contiguous
/// interval indicators). The degenerate zero-row matrix is allowed as a
/// carrier for pure-rational terms; [`validate_quasi_basic`] is the strict
/// predicate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiBasicMatrix {
    rows: Vec<Vec<u8>>,
    width: usize,
}

impl QuasiBasicMatrix {
    pub fn new(rows: Vec<Vec<u8>>, width: usize) -> Option<Self> {
        if rows.iter().any(|r| r.len() != width) {
            return None;
        }
        if rows
            .iter()
            .any(|r| r.iter().any(|&x| x > 1))
        {
            return None;
        }
        Some(QuasiBasicMatrix { rows, width })
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn depth(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }
}

/// Quasi-basic test: every row is a nonempty contiguous interval indicator
/// and no column is all-zero (requires at least one row and one column).
pub fn validate_quasi_basic(m: &QuasiBasicMatrix) -> bool {
    if m.depth() == 0 || m.width() == 0 {
        return false;
    }
    for row in &m.rows {
        let first = row.iter().position(|&x| x == 1);
        let last = row.iter().rposition(|&x| x == 1);
        match (first, last) {
            (Some(a), Some(b)) => {
                if row[a..=b].iter().any(|&x| x != 1) {
                    return false;
                }
            }
            _ => return false,
        }
    }
    for j in 0..m.width {
        if m.rows.iter().all(|r| r[j] == 0) {
            return false;
        }
    }
    true
}

/// A polynomial differential operator `sum coeff * prod_i (d/dz_i)^{e_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOperator {
    terms: BTreeMap<Vec<u32>, Rat>,
    nvars: usize,
}

impl DiffOperator {
    pub fn identity(nvars: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; nvars], rat_i(1));
        DiffOperator { terms, nvars }
    }

    pub fn new(nvars: usize) -> Self {
        DiffOperator {
            terms: BTreeMap::new(),
            nvars,
        }
    }

    pub fn add_term(&mut self, exps: Vec<u32>, coeff: Rat) {
        assert_eq!(exps.len(), self.nvars);
        if coeff.is_zero() {
            return;
        }
        let e = self.terms.entry(exps).or_insert_with(Rat::zero);
        *e += coeff;
        if e.is_zero() {
            let dead: Vec<Vec<u32>> = self
                .terms
                .iter()
                .filter(|(_, c)| c.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in dead {
                self.terms.remove(&k);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }
}

/// A generalized formal big zeta value `coefficient * Z(A, D | c)`.
#[derive(Clone, Debug)]
pub struct BigZetaTerm {
    pub matrix: QuasiBasicMatrix,
    pub operator: DiffOperator,
    pub shifts: Vec<i64>,
    pub coefficient: Rat,
}

impl BigZetaTerm {
    pub fn new(
        matrix: QuasiBasicMatrix,
        operator: DiffOperator,
        shifts: Vec<i64>,
        coefficient: Rat,
    ) -> Option<Self> {
        if shifts.len() != matrix.width() || operator.nvars != matrix.depth() {
            return None;
        }
        Some(BigZetaTerm {
            matrix,
            operator,
            shifts,
            coefficient,
        })
    }

    /// Plain `Z(A | c)` with the identity operator.
    pub fn plain(matrix: QuasiBasicMatrix, shifts: Vec<i64>, coefficient: Rat) -> Option<Self> {
        let d = matrix.depth();
        Self::new(matrix, DiffOperator::identity(d), shifts, coefficient)
    }

    pub fn weight(&self) -> usize {
        self.matrix.width()
    }

    pub fn depth(&self) -> usize {
        self.matrix.depth()
    }
}

/// Apply the operator, producing product pieces `(coeff, per-column powers)`.
fn operator_pieces(term: &BigZetaTerm) -> Vec<(Rat, Vec<u32>)> {
    let w = term.matrix.width();
    let d = term.matrix.depth();
    let mut out: Vec<(Rat, Vec<u32>)> = Vec::new();
    for (exps, c_op) in term.operator.terms() {
        let mut pieces: Vec<(Rat, Vec<u32>)> = vec![(c_op * &term.coefficient, vec![1; w])];
        for i in 0..d {
            for _ in 0..exps[i] {
                let mut next: Vec<(Rat, Vec<u32>)> = Vec::new();
                for (c, powers) in &pieces {
                    for j in 0..w {
                        if term.matrix.rows[i][j] == 1 {
                            let mut p2 = powers.clone();
                            p2[j] += 1;
                            next.push((c * rat_i(-(powers[j] as i64)), p2));
                        }
                    }
                }
                pieces = next;
            }
        }
        out.extend(pieces);
    }
    out
}

fn piece_to_hyperplane(term: &BigZetaTerm, coeff: Rat, powers: &[u32]) -> HyperplaneTerm {
    let d = term.matrix.depth();
    let w = term.matrix.width();
    let mut forms = Vec::with_capacity(w);
    for j in 0..w {
        let incidence: Vec<bool> = (0..d).map(|i| term.matrix.rows[i][j] == 1).collect();
        forms.push(Form {
            incidence,
            shift: term.shifts[j],
            power: powers[j],
        });
    }
    HyperplaneTerm {
        coeff,
        numerator: MPoly::one(d),
        forms,
    }
}

/// Convergence of the defining multiple series: pole-freeness of every
/// denominator on the lattice plus power counting over every variable subset,
/// applied to each operator-applied piece. Equivalent to the per-chamber
/// degree-chain test after gap substitution.
pub fn bigzeta_convergent(term: &BigZetaTerm) -> bool {
    let pieces = operator_pieces(term);
    if term.matrix.depth() == 0 {
        return term.shifts.iter().all(|&c| c != 0);
    }
    pieces
        .iter()
        .all(|(c, powers)| engine::term_convergent(&piece_to_hyperplane(term, c.clone(), powers)))
}

/// Identical-row collapse on the rewriting representation: merges one group
/// of summation variables with identical denominator incidence, multiplying
/// the numerator by the composition count (the `binom(z-1, r-1)` factor when
/// the numerator does not involve the merged variables).
pub fn collapse_identical_rows(term: &HyperplaneTerm) -> Result<HyperplaneTerm, BigZetaError> {
    collapse_identical_group(term)
}

/// Reduce a convergent generalized big zeta value to an exact combination of
/// multiple zeta values of weight <= w + deg D and depth <= d.
pub fn reduce_bigzeta(term: &BigZetaTerm) -> Result<MzvCombination, BigZetaError> {
    if term.matrix.depth() == 0 {
        // Pure rational: prod 1/c_j (operator constant part only).
        let mut out = MzvCombination::zero();
        for (exps, c_op) in term.operator.terms() {
            if exps.iter().all(|&e| e == 0) {
                let mut v = c_op * &term.coefficient;
                for &c in &term.shifts {
                    if c == 0 {
                        return Err(BigZetaError::Divergent);
                    }
                    v /= rat_i(c);
                }
                out.add_term(crate::mzv::MzvIndex::empty(), v);
            }
        }
        return Ok(out);
    }
    if !bigzeta_convergent(term) {
        return Err(BigZetaError::Divergent);
    }
    let mut eng = engine::Engine::new(200_000);
    for (c, powers) in operator_pieces(term) {
        eng.run(piece_to_hyperplane(term, c, &powers))?;
    }
    Ok(eng.result)
}
