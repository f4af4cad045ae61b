//! Certified multiple zeta value evaluation.
//!
//! Uses path composition at 1/2: writing the MZV as an iterated integral of
//! its classical word and splitting the path at 1/2 gives
//! `zeta(w) = sum_{uv = w} L(u) * L(dual v)` where `L` evaluates a word as a
//! multiple polylogarithm at 1/2 and the dual reverses the suffix and swaps
//! the letters. The polylog sums converge geometrically, so thirty digits
//! need barely two hundred terms; all arithmetic is fixed-point with explicit
//! error accounting.

use super::fixed::{ulp, up, Certified};
use super::NumericValue;
use crate::error::NumericError;
use crate::mzv::{MzvCombination, MzvIndex};
use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::OnceLock;

/// Letters of the classical word: true = dt/(1-t), false = dt/t.
fn index_word(index: &MzvIndex) -> Vec<bool> {
    let mut w = Vec::with_capacity(index.weight() as usize);
    for &k in index.parts() {
        w.push(true);
        for _ in 1..k {
            w.push(false);
        }
    }
    w
}

/// Word -> polylog index (positions of y letters); word must start with y.
fn word_to_li_index(word: &[bool]) -> Vec<u32> {
    debug_assert!(word.first() == Some(&true));
    let mut parts: Vec<u32> = Vec::new();
    for &y in word {
        if y {
            parts.push(1);
        } else {
            *parts.last_mut().unwrap() += 1;
        }
    }
    parts
}

/// Multiple polylogarithm at 1/2, truncated at `cutoff` with a certified tail
/// bound: `Li_{k_1..k_u}(1/2) = sum_{0<n_1<...<n_u} 2^{-n_u} / prod n_i^{k_i}`.
fn li_half(parts: &[u32], scale: u32, cutoff: u32) -> Certified {
    let u = parts.len();
    debug_assert!(u >= 1);
    // cum[n] over levels; level j keeps C_j(n) = sum_{m<n} C_{j-1}(m)/m^{k_j}
    let mut prev: Vec<Certified> = vec![Certified::from_i64(1, scale); cutoff as usize + 1];
    for &k in &parts[..u - 1] {
        let mut next = Vec::with_capacity(cutoff as usize + 1);
        next.push(Certified::zero(scale)); // unused slot n = 0
        let mut cum = Certified::zero(scale);
        for n in 1..=cutoff as u64 {
            next.push(cum.clone());
            let mut t = prev[n as usize].clone();
            for _ in 0..k {
                t = t.div_u64(n);
            }
            cum = cum.add(&t);
        }
        prev = next;
    }
    let k_last = *parts.last().unwrap();
    let mut acc = Certified::zero(scale);
    for n in 1..=cutoff as u64 {
        let mut t = prev[n as usize].clone();
        for _ in 0..k_last {
            t = t.div_u64(n);
        }
        t = t.shr(n as u32);
        acc = acc.add(&t);
    }
    // Tail: sum_{n>cutoff} 2^{-n} * #chains * weights <= sum_{n>cutoff} n^{u-1} 2^{-n}
    // For n >= cutoff >= 4u the term ratio is at most 0.6, so the tail is at
    // most 2.5 * (cutoff+1)^{u-1} * 2^{-(cutoff+1)}.
    let c1 = cutoff as f64 + 1.0;
    let tail = up(2.5 * c1.powi(u as i32 - 1) * 2f64.powi(-(cutoff.min(2000) as i32 + 1)));
    acc.err = up(acc.err + tail);
    acc
}

/// Evaluate a classical word from 0 to 1/2 (empty word = 1).
fn eval_half_word(word: &[bool], scale: u32, cutoff: u32) -> Certified {
    if word.is_empty() {
        return Certified::from_i64(1, scale);
    }
    li_half(&word_to_li_index(word), scale, cutoff)
}

fn eval_core(index: &MzvIndex, scale: u32, cutoff: u32) -> Certified {
    let word = index_word(index);
    let n = word.len();
    let mut acc = Certified::zero(scale);
    for split in 0..=n {
        let prefix = &word[..split];
        let suffix = &word[split..];
        // dual of suffix: reverse and swap letters
        let dual: Vec<bool> = suffix.iter().rev().map(|&y| !y).collect();
        let a = eval_half_word(prefix, scale, cutoff);
        let b = eval_half_word(&dual, scale, cutoff);
        acc = acc.add(&a.mul(&b));
    }
    acc
}

fn cache() -> &'static Mutex<HashMap<(Vec<u32>, u32), (num_bigint::BigInt, u32, f64)>> {
    static CACHE: OnceLock<Mutex<HashMap<(Vec<u32>, u32), (num_bigint::BigInt, u32, f64)>>> =
        OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Evaluate an MZV to at least `digits` certified decimal digits
/// (1 <= digits <= 30; weight <= 10, depth <= 4).
pub fn eval_mzv(index: &MzvIndex, digits: u32) -> Result<NumericValue, NumericError> {
    if digits == 0 || digits > 30 {
        return Err(NumericError::PrecisionUnreachable { digits });
    }
    if index.weight() > 10 || index.depth() > 8 {
        return Err(NumericError::OutOfRange(format!(
            "weight {} depth {}",
            index.weight(),
            index.depth()
        )));
    }
    if index.is_empty() {
        return Ok(NumericValue {
            value: Certified::from_i64(1, working_scale(digits, 0)),
            error: 0.0,
        });
    }
    let key = (index.parts().to_vec(), digits);
    if let Some((mant, scale, err)) = cache().lock().unwrap().get(&key).cloned() {
        return Ok(NumericValue {
            value: Certified { mant, scale, err },
            error: err,
        });
    }
    let target = 10f64.powi(-(digits as i32));
    let mut scale = working_scale(digits, index.weight());
    let mut cutoff = 80 + digits * 5;
    for _ in 0..6 {
        let v = eval_core(index, scale, cutoff);
        if v.err <= target * 0.9 {
            cache()
                .lock()
                .unwrap()
                .insert(key, (v.mant.clone(), v.scale, v.err));
            let err = v.err;
            return Ok(NumericValue { value: v, error: err });
        }
        scale += 64;
        cutoff += 64;
    }
    Err(NumericError::PrecisionUnreachable { digits })
}

fn working_scale(digits: u32, weight: u32) -> u32 {
    // requested digits in bits, plus guard bits growing with the weight
    (digits as f64 * 3.33).ceil() as u32 + 2 * weight + 48
}

/// Evaluate a combination `sum coeff * zeta(index)` with propagated bounds.
pub fn eval_combination(c: &MzvCombination, digits: u32) -> Result<NumericValue, NumericError> {
    let scale = working_scale(digits, 10);
    let mut acc = Certified::zero(scale);
    for (idx, coeff) in c.terms() {
        let v = eval_mzv(idx, digits)?;
        // align scales
        let aligned = align(&v.value, scale);
        acc = acc.add(&aligned.mul_rat(coeff));
    }
    let err = acc.err;
    Ok(NumericValue { value: acc, error: err })
}

fn align(v: &Certified, scale: u32) -> Certified {
    if v.scale == scale {
        return v.clone();
    }
    if v.scale < scale {
        Certified {
            mant: &v.mant << (scale - v.scale),
            scale,
            err: v.err,
        }
    } else {
        Certified {
            mant: &v.mant >> (v.scale - scale),
            scale,
            err: up(v.err + ulp(scale)),
        }
    }
}

/// Decide equality of two exact combinations numerically: true when
/// |eval(a - b)| <= tol with the evaluation error inside the budget.
pub fn combinations_equal_numeric(
    a: &MzvCombination,
    b: &MzvCombination,
    tol: f64,
) -> Result<bool, NumericError> {
    if a == b {
        return Ok(true);
    }
    let diff = a.sub(b);
    if diff.is_zero() {
        return Ok(true);
    }
    let digits = 14;
    let v = eval_combination(&diff, digits)?;
    Ok(v.value.to_f64().abs() <= tol + v.error)
}

/// Exact-or-numeric agreement used by the dual-route checks.
pub fn combinations_agree(a: &MzvCombination, b: &MzvCombination, tol: f64) -> bool {
    a == b || combinations_equal_numeric(a, b, tol).unwrap_or(false)
}

/// Convenience: f64 value of a combination (no certification).
pub fn combination_f64(c: &MzvCombination) -> Result<f64, NumericError> {
    Ok(eval_combination(c, 15)?.value.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat_i as ri;
    use crate::numeric::fixed::pi;

    #[test]
    fn zeta_2_matches_pi_squared_over_six() {
        let v = eval_mzv(&MzvIndex::new(vec![2]).unwrap(), 18).unwrap();
        let p = pi(v.value.scale);
        let target = p.mul(&p).div_u64(6);
        let diff = (v.value.to_f64() - target.to_f64()).abs();
        assert!(diff < 1e-15, "diff {}", diff);
        assert!(v.error < 1e-16);
        let s = v.value.to_decimal_string(12);
        assert!(s.starts_with("1.644934066848"), "{}", s);
    }

    #[test]
    fn zeta_3_digits() {
        let v = eval_mzv(&MzvIndex::new(vec![3]).unwrap(), 15).unwrap();
        let s = v.value.to_decimal_string(12);
        assert!(s.starts_with("1.202056903159"), "{}", s);
    }

    #[test]
    fn euler_identity_zeta_1_2() {
        let a = eval_mzv(&MzvIndex::new(vec![1, 2]).unwrap(), 16).unwrap();
        let b = eval_mzv(&MzvIndex::new(vec![3]).unwrap(), 16).unwrap();
        assert!((a.value.to_f64() - b.value.to_f64()).abs() < 1e-14);
    }

    #[test]
    fn stuffle_consistency_small() {
        let two = MzvIndex::new(vec![2]).unwrap();
        let three = MzvIndex::new(vec![3]).unwrap();
        let lhs = eval_combination(&crate::mzv::stuffle(&two, &three), 14).unwrap();
        let l = eval_mzv(&two, 14).unwrap();
        let r = eval_mzv(&three, 14).unwrap();
        assert!((lhs.value.to_f64() - l.value.to_f64() * r.value.to_f64()).abs() < 1e-12);
    }

    #[test]
    fn empty_and_combination() {
        let mut c = MzvCombination::constant(crate::exact::rational::rat(1, 6));
        let v = eval_combination(&c, 10).unwrap();
        assert!((v.value.to_f64() - 1.0 / 6.0).abs() < 1e-10);
        c.add_term(MzvIndex::new(vec![2]).unwrap(), ri(-1));
        let v = eval_combination(&c, 12).unwrap();
        assert!((v.value.to_f64() - (1.0 / 6.0 - 1.6449340668482264)).abs() < 1e-11);
    }
}
