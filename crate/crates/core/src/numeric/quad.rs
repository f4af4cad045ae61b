//! Double-exponential (tanh-sinh) quadrature for small simplex integrals.
//!
//! The simplex is integrated variable by variable; the tanh-sinh rule absorbs
//! endpoint power and logarithm singularities, which is exactly where Brown
//! integrands are singular (0, 1, and coinciding neighbours). Error values
//! are level-difference estimates, not certificates.

use super::fixed::Certified;
use super::NumericValue;
use crate::brown::{brown_convergent, BrownIntegrand};
use crate::error::NumericError;
use num_bigint::BigInt;
use num_traits::FromPrimitive;

/// Integer log powers attached to a Brown integrand: per-variable
/// `log^{la_i} t_i * log^{lb_i}(1-t_i)` and per-pair `log^{lc_ij}(t_j-t_i)`.
#[derive(Clone, Debug, Default)]
pub struct LogPowers {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub c: std::collections::BTreeMap<(usize, usize), u32>,
}

fn eval_integrand(b: &BrownIntegrand, logs: Option<&LogPowers>, t: &[f64]) -> f64 {
    let n = b.size();
    let mut v = 1.0f64;
    for i in 0..n {
        v *= t[i].powi(b.a_exp()[i] as i32);
        v *= (1.0 - t[i]).powi(b.b_exp()[i] as i32);
    }
    for (&(i, j), &e) in b.c_exp() {
        v *= (t[j] - t[i]).powi(e as i32);
    }
    if let Some(l) = logs {
        for i in 0..n {
            if l.a.get(i).copied().unwrap_or(0) > 0 {
                v *= t[i].ln().powi(l.a[i] as i32);
            }
            if l.b.get(i).copied().unwrap_or(0) > 0 {
                v *= (1.0 - t[i]).ln().powi(l.b[i] as i32);
            }
        }
        for (&(i, j), &e) in &l.c {
            v *= (t[j] - t[i]).ln().powi(e as i32);
        }
    }
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

/// Tanh-sinh rule on (a, b), refined until the level difference is below the
/// relative tolerance; returns (value, error estimate, converged?).
fn tanh_sinh<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_level: u32,
) -> (f64, f64, bool) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut g = |t: f64| -> f64 {
        let u = std::f64::consts::FRAC_PI_2 * t.sinh();
        let x = mid + half * u.tanh();
        if x <= a || x >= b {
            return 0.0;
        }
        let w = half * std::f64::consts::FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
        if !w.is_finite() || w == 0.0 {
            return 0.0;
        }
        let y = f(x);
        if y.is_finite() {
            w * y
        } else {
            0.0
        }
    };
    let t_max = 3.8f64;
    let mut h = 1.0f64;
    let mut sum = g(0.0);
    let mut k = 1;
    while (k as f64) * h <= t_max {
        let t = k as f64 * h;
        sum += g(t) + g(-t);
        k += 1;
    }
    let mut value = sum * h;
    let mut err = f64::INFINITY;
    for _ in 0..max_level {
        h *= 0.5;
        let mut add = 0.0;
        let mut k = 1;
        while (k as f64) * h <= t_max {
            if k % 2 == 1 {
                let t = k as f64 * h;
                add += g(t) + g(-t);
            }
            k += 1;
        }
        let new_value = value * 0.5 + add * h;
        err = (new_value - value).abs();
        value = new_value;
        if err <= tol * value.abs().max(1e-12) {
            return (value, err, true);
        }
    }
    (value, err, false)
}

/// Iterated integral over the open simplex 0 < t_1 < ... < t_N < 1:
/// integrates t_N over (0,1), t_{N-1} over (0, t_N), and so on.
fn nested(
    b: &BrownIntegrand,
    logs: Option<&LogPowers>,
    tol: f64,
    max_level: u32,
) -> (f64, bool) {
    fn go(
        b: &BrownIntegrand,
        logs: Option<&LogPowers>,
        stack: &mut Vec<f64>,
        upper: f64,
        tol: f64,
        max_level: u32,
    ) -> (f64, bool) {
        let n = b.size();
        let mut all_ok = true;
        let f = |x: f64, stack: &mut Vec<f64>, all_ok: &mut bool| -> f64 {
            stack.push(x);
            let v = if stack.len() == n {
                // stack holds t_N, t_{N-1}, ..., t_1
                let mut t = vec![0.0; n];
                for (k, &s) in stack.iter().enumerate() {
                    t[n - 1 - k] = s;
                }
                eval_integrand(b, logs, &t)
            } else {
                let (v, ok) = go(b, logs, stack, x, tol, max_level);
                *all_ok &= ok;
                v
            };
            stack.pop();
            v
        };
        let (v, _e, ok) = {
            let mut closure = |x: f64| f(x, stack, &mut all_ok);
            tanh_sinh(&mut closure, 0.0, upper, tol, max_level)
        };
        (v, ok && all_ok)
    }
    let mut stack = Vec::with_capacity(b.size());
    go(b, logs, &mut stack, 1.0, tol, max_level)
}

fn run_quadrature(
    b: &BrownIntegrand,
    logs: Option<&LogPowers>,
    tol: f64,
) -> Result<NumericValue, NumericError> {
    if b.size() > 3 {
        return Err(NumericError::OutOfRange(format!("N = {}", b.size())));
    }
    let (vc, _) = nested(b, logs, tol * 8.0, 6);
    let (vf, okf) = nested(b, logs, tol * 0.25, 8);
    let est = (vf - vc).abs().max(1e-16 * vf.abs());
    if !okf && est > tol * vf.abs().max(1e-9) {
        return Err(NumericError::ToleranceUnreached {
            achieved: est / vf.abs().max(1e-300),
            requested: tol,
        });
    }
    let mant = BigInt::from_f64((vf * 2f64.powi(96)).round()).unwrap_or_default();
    Ok(NumericValue {
        value: Certified {
            mant,
            scale: 96,
            err: est,
        },
        error: est,
    })
}

/// Numeric integral of a convergent Brown integrand over the open simplex,
/// estimated relative error <= tol (N <= 3).
pub fn quadrature_brown(b: &BrownIntegrand, tol: f64) -> Result<NumericValue, NumericError> {
    if !brown_convergent(b) {
        return Err(NumericError::Divergent);
    }
    run_quadrature(b, None, tol)
}

/// Numeric integral of a log-augmented Brown integrand (Selberg log moments).
pub fn quadrature_log_brown(
    b: &BrownIntegrand,
    logs: &LogPowers,
    tol: f64,
) -> Result<NumericValue, NumericError> {
    if !brown_convergent(b) {
        return Err(NumericError::Divergent);
    }
    run_quadrature(b, Some(logs), tol)
}
