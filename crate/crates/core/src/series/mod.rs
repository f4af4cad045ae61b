//! Shifted multiple harmonic series and their reduction to multiple zeta
//! values.
//!
//! Provides:
//! - [`ShiftedSeries`]: `S_{c_1..c_r}(k_1..k_r) = sum_{0<n_1<...<n_r} prod (n_i + c_i)^{-k_i}`
//! - [`ResidueList`] and [`telescoped_sum`]: exact value of `sum_{n>0} sum_j a_j/(n+i_j)`
//!   when the residues cancel
//! - [`shifted_series_convergent`]: the lattice pole test
//! - [`degree_convergence`]: the suffix degree-chain convergence test
//! - [`reduce_shifted`]: full reduction by recursion on the summation changing number
//! - [`chain`]: the underlying chain-series engine shared with the word and
//!   big zeta reducers

pub mod chain;
pub mod faulhaber;

use crate::error::SeriesError;
use crate::exact::pfrac::harmonic;
use crate::exact::rational::{rat_i, Rat};
use crate::mzv::MzvCombination;
use num_traits::Zero;

pub use chain::{reduce_chain, reduce_plain, ChainTerm};

/// The shifted multiple harmonic series `S_{c_1..c_r}(k_1..k_r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedSeries {
    shifts: Vec<i64>,
    exponents: Vec<u32>,
}

impl ShiftedSeries {
    /// Requires depth >= 1 and all exponents >= 1. Convergence (in particular
    /// the final exponent >= 2) is checked separately.
    pub fn new(shifts: Vec<i64>, exponents: Vec<u32>) -> Option<Self> {
        if shifts.is_empty() || shifts.len() != exponents.len() {
            return None;
        }
        if exponents.iter().any(|&k| k == 0) {
            return None;
        }
        Some(ShiftedSeries { shifts, exponents })
    }

    pub fn shifts(&self) -> &[i64] {
        &self.shifts
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn depth(&self) -> usize {
        self.shifts.len()
    }

    /// The summation changing number `C = |c_1| + ... + |c_r|`, the measure
    /// of the decrement recursion.
    pub fn summation_changing_number(&self) -> u64 {
        self.shifts.iter().map(|c| c.unsigned_abs()).sum()
    }
}

/// A list of simple poles `a_j / (u + i_j)` with pairwise distinct shifts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueList {
    entries: Vec<(i64, Rat)>,
}

impl ResidueList {
    /// Shifts must be pairwise distinct.
    pub fn new(entries: Vec<(i64, Rat)>) -> Option<Self> {
        for (a, (sa, _)) in entries.iter().enumerate() {
            for (sb, _) in &entries[a + 1..] {
                if sa == sb {
                    return None;
                }
            }
        }
        Some(ResidueList { entries })
    }

    pub fn entries(&self) -> &[(i64, Rat)] {
        &self.entries
    }
}

/// Exact value of `sum_{n>0} sum_j a_j/(n + i_j)` when `sum a_j = 0` and all
/// shifts are nonnegative: the telescoped closed form `-sum a_j H_{i_j}`.
pub fn telescoped_sum(h: &ResidueList) -> Result<Rat, SeriesError> {
    let total: Rat = h.entries.iter().map(|(_, a)| a.clone()).sum();
    if !total.is_zero() {
        return Err(SeriesError::NonzeroResidueSum);
    }
    let mut out = Rat::zero();
    for (shift, a) in &h.entries {
        if *shift < 0 {
            return Err(SeriesError::NegativeShift { shift: *shift });
        }
        out -= a * harmonic(*shift).expect("nonnegative shift");
    }
    Ok(out)
}

/// Convergence of a shifted series: final exponent >= 2 and no lattice point
/// `0 < n_1 < ... < n_r` meets a pole `n_i = -c_i`. Since `n_i` ranges over
/// `[i, infinity)`, the pole test is `-c_i < i` for every position.
pub fn shifted_series_convergent(s: &ShiftedSeries) -> bool {
    if *s.exponents.last().unwrap() < 2 {
        return false;
    }
    s.shifts
        .iter()
        .enumerate()
        .all(|(i, &c)| -c < (i as i64 + 1))
}

/// Lemma-style degree-chain convergence test for nested sums
/// `sum prod g_i(n_i - n_{i-1}) / f_i(n_i)`: every suffix starting at
/// position i (1-based) must satisfy
/// `sum_{j>=i} (deg f_j - deg g_j) >= r - i + 2`.
pub fn degree_convergence(pairs: &[(i64, i64)]) -> bool {
    let r = pairs.len();
    let mut suffix = 0i64;
    for i in (0..r).rev() {
        suffix += pairs[i].0 - pairs[i].1;
        if suffix < (r - i) as i64 + 1 {
            return false;
        }
    }
    true
}

/// Reduce a convergent shifted series to an exact combination of multiple
/// zeta values of weight <= sum k_i and depth <= r.
pub fn reduce_shifted(s: &ShiftedSeries) -> Result<MzvCombination, SeriesError> {
    if !shifted_series_convergent(s) {
        return Err(SeriesError::Divergent);
    }
    reduce_plain(s.shifts(), s.exponents(), rat_i(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;
    use crate::mzv::MzvIndex;

    #[test]
    fn telescoped_examples() {
        // sum (1/n - 1/(n+2)) = 3/2
        let h = ResidueList::new(vec![(0, rat_i(1)), (2, rat_i(-1))]).unwrap();
        assert_eq!(telescoped_sum(&h).unwrap(), rat(3, 2));
        // sum (1/n - 1/(n+1)) = 1
        let h = ResidueList::new(vec![(0, rat_i(1)), (1, rat_i(-1))]).unwrap();
        assert_eq!(telescoped_sum(&h).unwrap(), rat_i(1));
        // 1/(n+1) - 2/(n+2) + 1/(n+3): -(H_1 - 2 H_2 + H_3) = -(1 - 3 + 11/6) = 1/6
        let h = ResidueList::new(vec![(1, rat_i(1)), (2, rat_i(-2)), (3, rat_i(1))]).unwrap();
        assert_eq!(telescoped_sum(&h).unwrap(), rat(1, 6));
        // independent check: truncated summation with an O(1/N) tail
        let mut brute = 0.0f64;
        for n in 1..1_000_000i64 {
            brute += 1.0 / (n + 1) as f64 - 2.0 / (n + 2) as f64 + 1.0 / (n + 3) as f64;
        }
        assert!((brute - 1.0 / 6.0).abs() < 1e-5);
    }

    #[test]
    fn telescoped_errors() {
        let h = ResidueList::new(vec![(0, rat_i(1)), (2, rat_i(1))]).unwrap();
        assert_eq!(telescoped_sum(&h), Err(SeriesError::NonzeroResidueSum));
        let h = ResidueList::new(vec![(-1, rat_i(1)), (2, rat_i(-1))]).unwrap();
        assert_eq!(telescoped_sum(&h), Err(SeriesError::NegativeShift { shift: -1 }));
        assert!(ResidueList::new(vec![(1, rat_i(1)), (1, rat_i(-1))]).is_none());
    }

    #[test]
    fn convergence_tests() {
        let s = ShiftedSeries::new(vec![0], vec![2]).unwrap();
        assert!(shifted_series_convergent(&s));
        let s = ShiftedSeries::new(vec![-1], vec![2]).unwrap();
        assert!(!shifted_series_convergent(&s));
        let s = ShiftedSeries::new(vec![0, 0], vec![1, 2]).unwrap();
        assert!(shifted_series_convergent(&s));
        let s = ShiftedSeries::new(vec![0, -2], vec![1, 2]).unwrap();
        assert!(!shifted_series_convergent(&s));
        let s = ShiftedSeries::new(vec![0, -1], vec![1, 2]).unwrap();
        assert!(shifted_series_convergent(&s));
    }

    #[test]
    fn degree_chain() {
        assert!(degree_convergence(&[(2, 0)]));
        assert!(!degree_convergence(&[(1, 0)]));
        assert!(degree_convergence(&[(1, 0), (2, 0)]));
        assert!(!degree_convergence(&[(1, 0), (1, 0)]));
        assert!(!degree_convergence(&[(0, 0), (2, 0)]));
        assert!(degree_convergence(&[(1, 0), (1, 0), (2, 0)]));
    }

    #[test]
    fn reduce_base_and_shift() {
        let s = ShiftedSeries::new(vec![0, 0], vec![1, 2]).unwrap();
        assert_eq!(
            reduce_shifted(&s).unwrap(),
            MzvCombination::single(MzvIndex::new(vec![1, 2]).unwrap(), rat_i(1))
        );
        let s = ShiftedSeries::new(vec![1], vec![2]).unwrap();
        let mut expect = MzvCombination::single(MzvIndex::new(vec![2]).unwrap(), rat_i(1));
        expect.add_term(MzvIndex::empty(), rat_i(-1));
        assert_eq!(reduce_shifted(&s).unwrap(), expect);
        let s = ShiftedSeries::new(vec![-1], vec![2]).unwrap();
        assert_eq!(reduce_shifted(&s), Err(SeriesError::Divergent));
    }
}
