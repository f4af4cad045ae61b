//! Brute-force lattice summation with rigorous tail bounds.
//!
//! All summands are positive on convergent inputs (pole-free denominators are
//! strictly positive), so truncation errors are one-sided and bounded by
//! integral comparison.

use super::fixed::{up, Certified};
use super::NumericValue;
use crate::bigzeta::BigZetaTerm;
use crate::error::NumericError;
use crate::series::{shifted_series_convergent, ShiftedSeries};
use num_bigint::BigInt;
use num_traits::FromPrimitive;

const SCALE: u32 = 96;

fn certify_f64(x: f64, err: f64) -> NumericValue {
    let mant = BigInt::from_f64((x * 2f64.powi(SCALE as i32)).round()).unwrap_or_default();
    NumericValue {
        value: Certified {
            mant,
            scale: SCALE,
            err,
        },
        error: err,
    }
}

/// Truncated sum of a shifted multiple harmonic series over
/// `0 < n_1 < ... < n_r <= cutoff`, with a rigorous tail bound.
pub fn brute_force_shifted(
    s: &ShiftedSeries,
    cutoff: u64,
) -> Result<NumericValue, NumericError> {
    if !shifted_series_convergent(s) {
        return Err(NumericError::Divergent);
    }
    if cutoff < 10 {
        return Err(NumericError::OutOfRange("cutoff below 10".into()));
    }
    let r = s.depth();
    let shifts = s.shifts();
    let exps = s.exponents();
    // Level-by-level cumulative sums; Kahan compensation.
    let t = cutoff as usize;
    let mut prev: Vec<f64> = vec![1.0; t + 1];
    for level in 0..r - 1 {
        let mut next = vec![0.0f64; t + 1];
        let mut cum = 0.0f64;
        let mut comp = 0.0f64;
        for n in 1..=t {
            next[n] = cum;
            let mut term = prev[n];
            if term == 0.0 {
                continue;
            }
            let base = (n as i64 + shifts[level]) as f64;
            for _ in 0..exps[level] {
                term /= base;
            }
            // Kahan add
            let y = term - comp;
            let tsum = cum + y;
            comp = (tsum - cum) - y;
            cum = tsum;
        }
        prev = next;
    }
    let mut total = 0.0f64;
    let mut comp = 0.0f64;
    let last = r - 1;
    for n in 1..=t {
        let mut term = prev[n];
        if term == 0.0 {
            continue;
        }
        let base = (n as i64 + shifts[last]) as f64;
        for _ in 0..exps[last] {
            term /= base;
        }
        let y = term - comp;
        let tsum = total + y;
        comp = (tsum - total) - y;
        total = tsum;
    }
    let tail = shifted_tail_bound(s, cutoff);
    // f64 accumulation error: ~ (#adds) * eps * magnitude.
    let fp = up((t as f64) * (r as f64) * 2.3e-16 * (total.abs() + 1.0));
    Ok(certify_f64(total, up(tail + fp)))
}

/// Tail bound for truncating the outer variable at `cutoff`: the inner chain
/// is bounded by `(1 + ln 2n)^{r-1}/(r-1)!` and the outer factor by
/// `2^{k_r}/n^{k_r}` once `n >= 2|c_r|`, so integral comparison applies.
fn shifted_tail_bound(s: &ShiftedSeries, cutoff: u64) -> f64 {
    let r = s.depth();
    let k_last = *s.exponents().last().unwrap() as i32;
    let c_last = *s.shifts().last().unwrap();
    let t = cutoff as f64;
    debug_assert!(cutoff as i64 >= 2 * c_last.abs().max(1));
    let log_factor = (1.0 + (2.0 * t).ln()).powi(r as i32 - 1);
    let mut fact = 1.0;
    for j in 1..r {
        fact *= j as f64;
    }
    // sum_{n>T} (1+ln 2n)^{r-1} (2/n)^{k} / (r-1)!
    //   <= 2^k/(r-1)! * [(1+ln2T)^{r-1} T^{-k} + int_T^inf (1+ln2x)^{r-1} x^{-k} dx]
    // and the integrand decays at least like x^{-3/2} past T >= 20.
    let integral = log_factor * t.powi(1 - k_last) / (k_last as f64 - 1.5).max(0.5);
    let first = log_factor * t.powi(-k_last);
    up(2f64.powi(k_last) / fact * (first + integral))
}

/// Truncated lattice sum of a big zeta term over `[1..cutoff]^d` with a
/// rigorous tail bound (d <= 3).
pub fn brute_force_bigzeta(
    term: &BigZetaTerm,
    cutoff: u64,
) -> Result<NumericValue, NumericError> {
    let d = term.depth();
    if d == 0 || d > 3 {
        return Err(NumericError::OutOfRange(format!("depth {}", d)));
    }
    if cutoff < 10 {
        return Err(NumericError::OutOfRange("cutoff below 10".into()));
    }
    if !crate::bigzeta::bigzeta_convergent(term) {
        return Err(NumericError::Divergent);
    }
    // Forms with unit coefficients; identity operator only for the oracle.
    if term.operator.degree() != 0 {
        return Err(NumericError::OutOfRange(
            "brute force supports the identity operator".into(),
        ));
    }
    let op_scale: f64 = {
        let mut s = 0.0;
        for (e, c) in term.operator.terms() {
            if e.iter().all(|&x| x == 0) {
                s = crate::exact::rational::rat_to_f64(c);
            }
        }
        s * crate::exact::rational::rat_to_f64(&term.coefficient)
    };
    let problem = LatticeProblem::from_term(term);
    let (total, tail) = box_sum_with_tail(&problem, cutoff);
    if !tail.is_finite() {
        return Err(NumericError::OutOfRange("no usable tail bound".into()));
    }
    let fp = up((cutoff as f64).powi(d as i32) * 2.3e-16 * (total.abs() + 1.0));
    Ok(certify_f64(total * op_scale, up((tail + fp) * op_scale.abs())))
}

/// A bare lattice-sum problem: `sum_{n in N^v} prod_j L_j^{-k_j}`.
#[derive(Clone, Debug)]
struct LatticeProblem {
    nvars: usize,
    /// (incidence, shift, power)
    forms: Vec<(Vec<bool>, i64, u32)>,
}

impl LatticeProblem {
    fn from_term(term: &BigZetaTerm) -> Self {
        let d = term.depth();
        let w = term.matrix.width();
        let forms = (0..w)
            .map(|j| {
                let inc: Vec<bool> = (0..d).map(|i| term.matrix.rows()[i][j] == 1).collect();
                (inc, term.shifts[j], 1u32)
            })
            .collect();
        LatticeProblem { nvars: d, forms }
    }

    fn eval(&self, n: &[u64]) -> f64 {
        let mut v = 1.0;
        for (inc, shift, power) in &self.forms {
            let mut l = *shift as f64;
            for (i, &b) in inc.iter().enumerate() {
                if b {
                    l += n[i] as f64;
                }
            }
            for _ in 0..*power {
                v /= l;
            }
        }
        v
    }
}

/// Sum over the box `[1..cutoff]^v` plus a rigorous upper bound on the rest.
/// All summands are positive and coordinate-wise decreasing.
fn box_sum_with_tail(p: &LatticeProblem, cutoff: u64) -> (f64, f64) {
    if p.nvars == 0 {
        let mut v = 1.0;
        for (_, shift, power) in &p.forms {
            for _ in 0..*power {
                v /= *shift as f64;
            }
        }
        return (v, 0.0);
    }
    // box sum with Kahan compensation
    let mut total = 0.0f64;
    let mut comp = 0.0f64;
    let mut idx = vec![1u64; p.nvars];
    loop {
        let y = p.eval(&idx) - comp;
        let t = total + y;
        comp = (t - total) - y;
        total = t;
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] <= cutoff {
                break;
            }
            idx[k] = 1;
            k += 1;
            if k == p.nvars {
                break;
            }
        }
        if k == p.nvars {
            break;
        }
    }
    let tail = chamber_tail_bound(p, cutoff);
    (total, up(tail))
}

/// Rigorous bound on the sum outside the box: the complement is partitioned
/// by chambers (the chamber of a point has its largest block value above the
/// cutoff). Within a chamber the outer block value dominates every
/// coordinate; convergence guarantees, by a Hall-type allocation, that two
/// denominator powers can be assigned to the outer level and one to each
/// inner level, which reduces the tail to the one-dimensional integral
/// comparison with harmonic inner factors.
fn chamber_tail_bound(p: &LatticeProblem, cutoff: u64) -> f64 {
    let cmax: i64 = p
        .forms
        .iter()
        .map(|(_, c, _)| c.abs())
        .max()
        .unwrap_or(0);
    if (cutoff as i64) < 2 * cmax.max(1) {
        return f64::INFINITY;
    }
    let mut total = 0.0f64;
    for chamber in crate::bigzeta::chamber_decompose(p.nvars) {
        let s = chamber.gap_count();
        // gap coefficients: gamma[q][j] = #{i in blocks >= q covering form j}
        let mut gamma = vec![vec![0u32; p.forms.len()]; s];
        for (j, (inc, _, _)) in p.forms.iter().enumerate() {
            for (q, block) in chamber.blocks().iter().enumerate() {
                let cover = block.iter().filter(|&&i| inc[i]).count() as u32;
                for item in gamma.iter_mut().take(q + 1) {
                    item[j] += cover;
                }
            }
        }
        // allocate powers: 2 to the outer level s-1, 1 to each inner level
        let mut demand: Vec<usize> = Vec::new();
        demand.push(s - 1);
        demand.push(s - 1);
        for q in 0..s - 1 {
            demand.push(q);
        }
        let mut remaining: Vec<u32> = p.forms.iter().map(|(_, _, k)| *k).collect();
        if !allocate(&demand, &gamma, &mut remaining) {
            return f64::INFINITY;
        }
        // tail over outer value v > cutoff:
        //   2^2 * (2 + cmax + ln 2v)^{s-1}/(s-1)! * v^{-2}, summed by integral
        // comparison (the log-power factor is absorbed into v^{1/2}).
        let t = cutoff as f64;
        let log_factor = (2.0 + cmax as f64 + (2.0 * t).ln()).powi(s as i32 - 1);
        let mut fact = 1.0;
        for q in 1..s {
            fact *= q as f64;
        }
        let piece = 4.0 * log_factor / fact * (t.powi(-2) + 2.0 / t);
        total += piece;
    }
    up(total)
}

/// Backtracking allocation of form powers to levels: entry `demand[r] = q`
/// needs one power of a form with `gamma[q][j] >= 1`.
fn allocate(demand: &[usize], gamma: &[Vec<u32>], remaining: &mut Vec<u32>) -> bool {
    if demand.is_empty() {
        return true;
    }
    let q = demand[0];
    for j in 0..remaining.len() {
        if remaining[j] >= 1 && gamma[q][j] >= 1 {
            remaining[j] -= 1;
            if allocate(&demand[1..], gamma, remaining) {
                remaining[j] += 1;
                return true;
            }
            remaining[j] += 1;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigzeta::QuasiBasicMatrix;
    use crate::exact::rational::rat_i;

    #[test]
    fn shifted_series_oracle() {
        // S_{(1)}(2) = zeta(2) - 1
        let s = ShiftedSeries::new(vec![1], vec![2]).unwrap();
        let v = brute_force_shifted(&s, 10_000).unwrap();
        let expect = std::f64::consts::PI.powi(2) / 6.0 - 1.0;
        assert!((v.to_f64() - expect).abs() <= v.error, "err {}", v.error);
        assert!(v.error < 1e-3);
        // telescoping: 1/(n(n+1)) -> 1, via chain with shift pattern:
        let s = ShiftedSeries::new(vec![0, 0], vec![1, 2]).unwrap();
        let v = brute_force_shifted(&s, 20_000).unwrap();
        assert!((v.to_f64() - 1.2020569031595943).abs() <= v.error);
    }

    #[test]
    fn bracketing_cutoffs() {
        let s = ShiftedSeries::new(vec![0, 1], vec![1, 2]).unwrap();
        let lo = brute_force_shifted(&s, 1_000).unwrap();
        let hi = brute_force_shifted(&s, 10_000).unwrap();
        assert!((hi.to_f64() - lo.to_f64()).abs() <= lo.error);
    }

    #[test]
    fn bigzeta_oracle() {
        // sum 1/(n1 (n1+n2)^2) = zeta(3) approx 1.2020569
        let m = QuasiBasicMatrix::new(vec![vec![1, 1, 1], vec![0, 1, 1]], 3).unwrap();
        let t = BigZetaTerm::plain(m, vec![0, 0, 0], rat_i(1)).unwrap();
        let v = brute_force_bigzeta(&t, 2000).unwrap();
        assert!(
            (v.to_f64() - 1.2020569031595943).abs() <= v.error,
            "value {} err {}",
            v.to_f64(),
            v.error
        );
    }

    #[test]
    fn divergent_rejected() {
        let s = ShiftedSeries::new(vec![-1], vec![2]).unwrap();
        assert!(matches!(
            brute_force_shifted(&s, 100),
            Err(NumericError::Divergent)
        ));
    }
}
