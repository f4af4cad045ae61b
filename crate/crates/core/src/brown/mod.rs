//! Brown integrands `prod t_i^{a_i} (1-t_i)^{b_i} prod_{i<j} (t_j-t_i)^{c_ij}`
//! over the simplex and their reduction to multiple zeta values.
//!
//! The pipeline normalizes signs (expanding positive `(1-t)` and difference
//! powers into monomials), applies the cube substitution
//! `t_i = x_i x_{i+1} ... x_N`, and reads off a generalized big zeta value
//! whose rows are the interval roots carved out by the `b` and `c` exponents.
//! For `c = 0` an independent word-integral route cross-checks the result.

pub mod polylog;
pub mod selberg;

use crate::error::BrownError;
use crate::exact::rational::{binomial, rat_i, Rat};
use crate::mzv::MzvCombination;
use crate::words::{reduce_word_series, DifferentialForm, WordIntegral};
use crate::bigzeta::{reduce_bigzeta, BigZetaTerm, QuasiBasicMatrix};
use std::collections::BTreeMap;

/// Exponent data of a Brown integrand on the N-simplex (variables 0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrownIntegrand {
    n: usize,
    a: Vec<i64>,
    b: Vec<i64>,
    c: BTreeMap<(usize, usize), i64>,
}

impl BrownIntegrand {
    pub fn new(a: Vec<i64>, b: Vec<i64>, c: BTreeMap<(usize, usize), i64>) -> Option<Self> {
        let n = a.len();
        if n == 0 || b.len() != n {
            return None;
        }
        for (&(i, j), _) in &c {
            if i >= j || j >= n {
                return None;
            }
        }
        let c = c.into_iter().filter(|&(_, e)| e != 0).collect();
        Some(BrownIntegrand { n, a, b, c })
    }

    pub fn beta(n: usize, a: Vec<i64>, b: Vec<i64>) -> Option<Self> {
        if a.len() != n || b.len() != n {
            return None;
        }
        Some(BrownIntegrand {
            n,
            a,
            b,
            c: BTreeMap::new(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn a_exp(&self) -> &[i64] {
        &self.a
    }

    pub fn b_exp(&self) -> &[i64] {
        &self.b
    }

    pub fn c_exp(&self) -> &BTreeMap<(usize, usize), i64> {
        &self.c
    }

    pub fn c_at(&self, i: usize, j: usize) -> i64 {
        self.c.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn has_differences(&self) -> bool {
        !self.c.is_empty()
    }
}

/// Power-counting convergence over the contiguous collapse strata:
/// every prefix collapsing to 0, every suffix collapsing to 1, and every
/// interior block collapsing to a point must carry positive total degree.
pub fn brown_convergent(b: &BrownIntegrand) -> bool {
    let n = b.n;
    // prefix {0..=j} -> 0
    for j in 0..n {
        let mut s: i64 = (j as i64) + 1;
        s += b.a[..=j].iter().sum::<i64>();
        for (&(u, v), &e) in &b.c {
            if v <= j {
                s += e;
            }
            let _ = u;
        }
        if s <= 0 {
            return false;
        }
    }
    // suffix {i..n-1} -> 1
    for i in 0..n {
        let mut s: i64 = (n - i) as i64;
        s += b.b[i..].iter().sum::<i64>();
        for (&(u, _v), &e) in &b.c {
            if u >= i {
                s += e;
            }
        }
        if s <= 0 {
            return false;
        }
    }
    // interior blocks {i..=j}, i < j
    for i in 0..n {
        for j in (i + 1)..n {
            let mut s: i64 = (j - i) as i64;
            for (&(u, v), &e) in &b.c {
                if u >= i && v <= j {
                    s += e;
                }
            }
            if s <= 0 {
                return false;
            }
        }
    }
    true
}

/// Expand positive `(1-t_i)` and `(t_j-t_i)` powers binomially so that every
/// output has `b <= 0` and `c <= 0`; the weighted integrands sum to the input
/// pointwise.
pub fn sign_normalize(b: &BrownIntegrand) -> Vec<(Rat, BrownIntegrand)> {
    let mut acc: Vec<(Rat, BrownIntegrand)> = vec![(rat_i(1), b.clone())];
    // positive b exponents
    for i in 0..b.n {
        if b.b[i] <= 0 {
            continue;
        }
        let e = b.b[i];
        let mut next = Vec::new();
        for (coeff, t) in &acc {
            for s in 0..=e {
                let mut t2 = t.clone();
                t2.b[i] = 0;
                t2.a[i] += s;
                let sign = if s % 2 == 0 { 1 } else { -1 };
                next.push((coeff * binomial(e, s as u32) * rat_i(sign), t2));
            }
        }
        acc = next;
    }
    // positive c exponents
    let pos_pairs: Vec<(usize, usize, i64)> = b
        .c
        .iter()
        .filter(|(_, &e)| e > 0)
        .map(|(&(i, j), &e)| (i, j, e))
        .collect();
    for (i, j, e) in pos_pairs {
        let mut next = Vec::new();
        for (coeff, t) in &acc {
            for s in 0..=e {
                let mut t2 = t.clone();
                t2.c.remove(&(i, j));
                t2.a[i] += s;
                t2.a[j] += e - s;
                let sign = if s % 2 == 0 { 1 } else { -1 };
                next.push((coeff * binomial(e, s as u32) * rat_i(sign), t2));
            }
        }
        acc = next;
    }
    acc
}

/// The cube substitution `t_i = x_i x_{i+1} ... x_N`: for `b, c <= 0` the
/// integral equals `sign * Z(A | f)` with `|b_i|` copies of the row covering
/// columns `i..=N` and `|c_ij|` copies of the row covering `i..=j-1`, and
/// monomial shifts `f_k = k + sum_{i<=k} (a_i + b_i) + sum_{(i,j): i<=k} c_ij`.
pub fn change_variables(b: &BrownIntegrand) -> Result<(i8, BigZetaTerm), BrownError> {
    let n = b.n;
    for i in 0..n {
        if b.b[i] > 0 {
            return Err(BrownError::PositiveExponent {
                which: format!("b[{}]", i),
            });
        }
    }
    for (&(i, j), &e) in &b.c {
        if e > 0 {
            return Err(BrownError::PositiveExponent {
                which: format!("c[{},{}]", i, j),
            });
        }
    }
    let mut rows: Vec<Vec<u8>> = Vec::new();
    for i in 0..n {
        for _ in 0..(-b.b[i]) {
            let mut row = vec![0u8; n];
            for item in row.iter_mut().skip(i) {
                *item = 1;
            }
            rows.push(row);
        }
    }
    for (&(i, j), &e) in &b.c {
        for _ in 0..(-e) {
            let mut row = vec![0u8; n];
            for item in row.iter_mut().take(j).skip(i) {
                *item = 1;
            }
            rows.push(row);
        }
    }
    let mut shifts = Vec::with_capacity(n);
    for k in 0..n {
        let mut f: i64 = (k as i64) + 1;
        f += b.a[..=k].iter().sum::<i64>();
        f += b.b[..=k].iter().sum::<i64>();
        for (&(i, _j), &e) in &b.c {
            if i <= k {
                f += e;
            }
        }
        shifts.push(f);
    }
    let matrix = QuasiBasicMatrix::new(rows, n).expect("0/1 rows");
    let term = BigZetaTerm::plain(matrix, shifts, rat_i(1)).expect("consistent shape");
    Ok((1, term))
}

/// Decompose a mixed-sign integrand into convergent big zeta terms.
///
/// Negative `b`/`c` exponents carve the matrix rows as in [`change_variables`].
/// Positive powers of `(1-t_i)` and `(t_j-t_i)` are expanded into monomials in
/// the adjacent gaps `g_k = t_{k+1} - t_k` (with `t_{N+1} = 1`), which keeps
/// every vanishing order intact; in cube coordinates a gap power
/// `(1-x_k)^{e}` is the e-th finite difference of the column-k factor,
/// `e! / prod_{s=0..e} (L_k + f_k + s)`, i.e. `e` duplicated columns with
/// stepped shifts. Every resulting piece is separately convergent whenever
/// the input is.
pub fn brown_to_bigzeta(b: &BrownIntegrand) -> Result<Vec<(Rat, BigZetaTerm)>, BrownError> {
    let n = b.n;
    // Base rows and shifts from the nonpositive parts.
    let mut neg = b.clone();
    for i in 0..n {
        neg.b[i] = neg.b[i].min(0);
    }
    neg.c = b
        .c
        .iter()
        .filter(|&(_, &e)| e < 0)
        .map(|(&p, &e)| (p, e))
        .collect();
    let (_, base) = change_variables(&neg)?;
    let base_rows = base.matrix.rows().to_vec();
    let base_shifts = base.shifts.clone();

    // Positive factors as powers of gap ranges [lo, hi] (gaps g_lo..g_hi).
    let mut pos_factors: Vec<(usize, usize, i64)> = Vec::new();
    for i in 0..n {
        if b.b[i] > 0 {
            pos_factors.push((i, n - 1, b.b[i]));
        }
    }
    for (&(i, j), &e) in &b.c {
        if e > 0 {
            pos_factors.push((i, j - 1, e));
        }
    }
    if pos_factors.is_empty() {
        return Ok(vec![(rat_i(1), base)]);
    }

    // Multinomial expansion of prod (sum_{k in range} g_k)^{power}.
    let mut pieces: Vec<(Rat, Vec<i64>)> = vec![(rat_i(1), vec![0; n])];
    for &(lo, hi, power) in &pos_factors {
        let mut assignments: Vec<(Rat, Vec<i64>)> = Vec::new();
        distribute(power, lo, hi, &mut vec![0; n], &mut assignments);
        let mut next = Vec::with_capacity(pieces.len() * assignments.len());
        for (c0, e0) in &pieces {
            for (c1, e1) in &assignments {
                let merged: Vec<i64> = e0.iter().zip(e1).map(|(a, b)| a + b).collect();
                next.push((c0 * c1, merged));
            }
        }
        pieces = next;
    }

    let mut out = Vec::with_capacity(pieces.len());
    for (mut coeff, evec) in pieces {
        // shift adjustments: gap g_k multiplies X_{k+1}, raising f_m for m > k
        let mut shifts: Vec<i64> = base_shifts.clone();
        for (m, item) in shifts.iter_mut().enumerate() {
            let add: i64 = evec[..m].iter().sum();
            *item += add;
        }
        // duplicated columns with stepped shifts and the e! factor
        let mut cols: Vec<(usize, i64)> = Vec::new();
        for k in 0..n {
            cols.push((k, shifts[k]));
            for s in 1..=evec[k] {
                cols.push((k, shifts[k] + s));
            }
            coeff *= crate::exact::factorial(evec[k] as u32);
        }
        let rows: Vec<Vec<u8>> = base_rows
            .iter()
            .map(|row| cols.iter().map(|&(k, _)| row[k]).collect())
            .collect();
        let new_shifts: Vec<i64> = cols.iter().map(|&(_, s)| s).collect();
        let width = new_shifts.len();
        let matrix = QuasiBasicMatrix::new(rows, width).expect("0/1 rows");
        let term = BigZetaTerm::plain(matrix, new_shifts, rat_i(1)).expect("consistent");
        out.push((coeff, term));
    }
    Ok(out)
}

/// All ways to distribute `power` units over gaps `lo..=hi` with multinomial
/// coefficients.
fn distribute(
    power: i64,
    lo: usize,
    hi: usize,
    acc: &mut Vec<i64>,
    out: &mut Vec<(Rat, Vec<i64>)>,
) {
    fn multinomial(total: i64, parts: &[i64]) -> Rat {
        let mut c = crate::exact::factorial(total as u32);
        for &p in parts {
            c /= crate::exact::factorial(p as u32);
        }
        c
    }
    fn rec(
        power: i64,
        k: usize,
        hi: usize,
        acc: &mut Vec<i64>,
        out: &mut Vec<(Rat, Vec<i64>)>,
        total: i64,
        lo: usize,
    ) {
        if k == hi {
            acc[k] = power;
            let parts: Vec<i64> = acc[lo..=hi].to_vec();
            out.push((multinomial(total, &parts), acc.clone()));
            acc[k] = 0;
            return;
        }
        for take in 0..=power {
            acc[k] = take;
            rec(power - take, k + 1, hi, acc, out, total, lo);
        }
        acc[k] = 0;
    }
    rec(power, lo, hi, acc, out, power, lo);
}

/// Word-integral route for difference-free integrands: each variable's factor
/// `t^{a_i} (1-t_i)^{b_i} dt` is a letter of the word alphabet.
fn words_for(b: &BrownIntegrand) -> Result<Vec<(Rat, WordIntegral)>, BrownError> {
    debug_assert!(!b.has_differences());
    let mut out = Vec::new();
    for (coeff, t) in sign_normalize(b) {
        let letters: Vec<DifferentialForm> = (0..t.n)
            .map(|i| {
                if t.b[i] == 0 {
                    DifferentialForm::power(t.a[i] + 1)
                } else {
                    DifferentialForm::pole(t.a[i], (-t.b[i]) as u32)
                }
            })
            .collect();
        out.push((coeff, WordIntegral::new(letters).expect("n >= 1")));
    }
    Ok(out)
}

/// Reduce a difference-free integrand through the word route.
pub fn reduce_brown_words(b: &BrownIntegrand) -> Result<MzvCombination, BrownError> {
    let mut out = MzvCombination::zero();
    for (coeff, w) in words_for(b)? {
        let r = reduce_word_series(&w)?;
        out.add_assign(&r.scale(&coeff));
    }
    Ok(out)
}

/// Reduce a convergent Brown integrand to an exact combination of multiple
/// zeta values of weight <= N. For `c = 0` the word route is computed as well
/// when applicable and the two must agree (exactly or to 1e-10).
pub fn reduce_brown(b: &BrownIntegrand) -> Result<MzvCombination, BrownError> {
    if !brown_convergent(b) {
        return Err(BrownError::Divergent);
    }
    let mut out = MzvCombination::zero();
    for (coeff, term) in brown_to_bigzeta(b)? {
        let reduced = reduce_bigzeta(&term)?;
        out.add_assign(&reduced.scale(&coeff));
    }
    if !b.has_differences() && word_route_applicable(b) {
        let words = reduce_brown_words(b)?;
        if !crate::numeric::combinations_agree(&out, &words, 1e-10) {
            return Err(BrownError::RouteMismatch(format!(
                "bigzeta {} vs words {}",
                out, words
            )));
        }
    }
    Ok(out)
}

/// The word route expands positive `(1-t)` powers into monomials, so it
/// applies only when every expanded component converges separately (always
/// true for `b <= 0`).
pub fn word_route_applicable(b: &BrownIntegrand) -> bool {
    if b.has_differences() {
        return false;
    }
    match words_for(b) {
        Ok(words) => words
            .iter()
            .all(|(_, w)| crate::words::word_convergent(w)),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;
    use crate::mzv::MzvIndex;

    fn plain(a: Vec<i64>, b: Vec<i64>) -> BrownIntegrand {
        let n = a.len();
        BrownIntegrand::beta(n, a, b).unwrap()
    }

    #[test]
    fn convergence_cases() {
        assert!(!brown_convergent(&plain(vec![-1], vec![0])));
        assert!(brown_convergent(&plain(vec![0, 0], vec![0, 0])));
        let mut c = BTreeMap::new();
        c.insert((0, 1), -1);
        let t = BrownIntegrand::new(vec![0, 0], vec![0, 0], c).unwrap();
        assert!(!brown_convergent(&t));
    }

    #[test]
    fn sign_normalize_cases() {
        // (1-t)^1 = 1 - t
        let parts = sign_normalize(&plain(vec![0], vec![1]));
        assert_eq!(parts.len(), 2);
        assert!(parts.contains(&(rat_i(1), plain(vec![0], vec![0]))));
        assert!(parts.contains(&(rat_i(-1), plain(vec![1], vec![0]))));
        // (t2 - t1)^1 = t2 - t1
        let mut c = BTreeMap::new();
        c.insert((0, 1), 1);
        let t = BrownIntegrand::new(vec![0, 0], vec![0, 0], c).unwrap();
        let parts = sign_normalize(&t);
        assert_eq!(parts.len(), 2);
        assert!(parts.contains(&(rat_i(1), plain(vec![0, 1], vec![0, 0]))));
        assert!(parts.contains(&(rat_i(-1), plain(vec![1, 0], vec![0, 0]))));
        // already nonpositive: identity
        let parts = sign_normalize(&plain(vec![2], vec![-1]));
        assert_eq!(parts, vec![(rat_i(1), plain(vec![2], vec![-1]))]);
    }

    #[test]
    fn change_variables_examples() {
        // N=2, a=(0,0), b=(-1,0): row (1,1), shifts (0,1)
        let (sign, term) = change_variables(&plain(vec![0, 0], vec![-1, 0])).unwrap();
        assert_eq!(sign, 1);
        assert_eq!(term.matrix.rows(), &[vec![1, 1]]);
        assert_eq!(term.shifts, vec![0, 1]);
        // N=2, a=(0,-1), b=(-1,0): zeta(2)
        let (_, term) = change_variables(&plain(vec![0, -1], vec![-1, 0])).unwrap();
        assert_eq!(term.shifts, vec![0, 0]);
        let c = reduce_bigzeta(&term).unwrap();
        assert_eq!(
            c,
            MzvCombination::single(MzvIndex::new(vec![2]).unwrap(), rat_i(1))
        );
        // N=1, a=2, b=0: degenerate, 1/3
        let (_, term) = change_variables(&plain(vec![2], vec![0])).unwrap();
        assert_eq!(term.depth(), 0);
        let c = reduce_bigzeta(&term).unwrap();
        assert_eq!(c, MzvCombination::constant(rat(1, 3)));
    }

    #[test]
    fn reduce_brown_examples() {
        // zeta(2) representation
        let c = reduce_brown(&plain(vec![0, -1], vec![-1, 0])).unwrap();
        assert_eq!(
            c,
            MzvCombination::single(MzvIndex::new(vec![2]).unwrap(), rat_i(1))
        );
        // int int (t2 - t1) = 1/6
        let mut cm = BTreeMap::new();
        cm.insert((0, 1), 1);
        let t = BrownIntegrand::new(vec![0, 0], vec![0, 0], cm).unwrap();
        let c = reduce_brown(&t).unwrap();
        assert_eq!(c, MzvCombination::constant(rat(1, 6)));
        // beta integral: a=2, b=1: B(3,2) = 2!1!/4! = 1/12
        let c = reduce_brown(&plain(vec![2], vec![1])).unwrap();
        assert_eq!(c, MzvCombination::constant(rat(1, 12)));
    }

    #[test]
    fn difference_exponent_instance() {
        // N=3, c_13 = -1: int 1/(t3 - t1) over the simplex = 1/2 (the middle
        // variable integrates to exactly the vanishing factor).
        let mut cm = BTreeMap::new();
        cm.insert((0, 2), -1);
        let t = BrownIntegrand::new(vec![0, 0, 0], vec![0, 0, 0], cm).unwrap();
        assert!(brown_convergent(&t));
        let c = reduce_brown(&t).unwrap();
        assert_eq!(c, MzvCombination::constant(rat(1, 2)));
        // a negative adjacent difference alone is divergent at the diagonal
        let mut cm = BTreeMap::new();
        cm.insert((0, 1), -1);
        let t = BrownIntegrand::new(vec![0, 1], vec![-1, 0], cm).unwrap();
        assert!(!brown_convergent(&t));
    }
}
