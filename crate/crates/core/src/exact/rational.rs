//! Exact rational scalars.
//!
//! `Rat` is an arbitrary-precision rational, always stored fully reduced with
//! a positive denominator. Coefficient strings serialize as `"p/q"` (or `"p"`
//! for integers).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat_i(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Format as `p/q`, or `p` when the denominator is 1.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p/q` or `p`.
pub fn rat_from_str(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().ok()?;
            Some(BigRational::from_integer(p))
        }
    }
}

/// Approximate a rational in f64 (for numeric cross-checks only).
pub fn rat_to_f64(r: &Rat) -> f64 {
    let mut num = r.numer().clone();
    let mut den = r.denom().clone();
    // Scale down so both parts fit in f64 without overflow.
    let bits = num.bits().max(den.bits());
    if bits > 900 {
        let shift = bits - 900;
        num >>= shift;
        den >>= shift;
    }
    let nf = bigint_to_f64(&num);
    let df = bigint_to_f64(&den);
    nf / df
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    let (sign, digits) = n.to_u64_digits();
    let mut x = 0.0f64;
    for &d in digits.iter().rev() {
        x = x * 1.8446744073709552e19 + d as f64;
    }
    if sign == num_bigint::Sign::Minus {
        -x
    } else {
        x
    }
}

/// Binomial coefficient with integer upper argument, exact.
pub fn binomial(n: i64, k: u32) -> Rat {
    let mut acc = rat_i(1);
    for j in 0..k {
        acc *= rat_i(n - j as i64);
        acc /= rat_i(j as i64 + 1);
    }
    acc
}

/// Factorial as a rational.
pub fn factorial(n: u32) -> Rat {
    let mut acc = BigInt::one();
    for j in 2..=n {
        acc *= BigInt::from(j);
    }
    BigRational::from_integer(acc)
}

/// Absolute value helper.
pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_round_trip() {
        for s in ["3/4", "-7/2", "5", "0", "-12"] {
            let r = rat_from_str(s).unwrap();
            assert_eq!(rat_to_string(&r), s);
        }
        assert_eq!(rat_to_string(&rat(2, 4)), "1/2");
        assert!(rat_from_str("1/0").is_none());
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), rat_i(10));
        assert_eq!(binomial(-1, 3), rat_i(-1));
        assert_eq!(binomial(3, 0), rat_i(1));
    }

    #[test]
    fn f64_conversion() {
        assert!((rat_to_f64(&rat(1, 3)) - 1.0 / 3.0).abs() < 1e-15);
        assert!((rat_to_f64(&rat(-22, 7)) + 22.0 / 7.0).abs() < 1e-14);
    }
}
