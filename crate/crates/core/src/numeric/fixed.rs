//! Fixed-point big-float arithmetic with conservative error tracking.
//!
//! A `Certified` value is `mant / 2^scale` together with an absolute error
//! bound. Additions at a common scale are exact; multiplications and
//! divisions round toward zero and account one ulp. Error bounds are kept in
//! f64 and always inflated by a small guard factor, so they remain upper
//! bounds despite f64 rounding.

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, Zero};

use crate::exact::rational::Rat;

/// Inflate an error bound against f64 rounding.
pub(crate) fn up(x: f64) -> f64 {
    x * (1.0 + 1e-12) + 1e-300
}

#[derive(Clone, Debug)]
pub struct Certified {
    pub(crate) mant: BigInt,
    pub(crate) scale: u32,
    /// Absolute error bound.
    pub err: f64,
}

impl Certified {
    pub fn scale(&self) -> u32 {
        self.scale
    }
}

impl Certified {
    pub fn zero(scale: u32) -> Self {
        Certified {
            mant: BigInt::zero(),
            scale,
            err: 0.0,
        }
    }

    pub fn from_i64(n: i64, scale: u32) -> Self {
        Certified {
            mant: BigInt::from(n) << scale,
            scale,
            err: 0.0,
        }
    }

    /// Embed an f64 (used by estimate-grade oracles).
    pub fn from_f64(x: f64, scale: u32, err: f64) -> Self {
        use num_traits::FromPrimitive;
        Certified {
            mant: BigInt::from_f64((x * 2f64.powi(scale.min(900) as i32)).round())
                .unwrap_or_default(),
            scale,
            err,
        }
    }

    /// Round a rational to the grid; error at most one ulp.
    pub fn from_rat(r: &Rat, scale: u32) -> Self {
        let num = r.numer() << scale;
        let mant = num / r.denom();
        Certified {
            mant,
            scale,
            err: up(ulp(scale)),
        }
    }

    pub fn ulp(&self) -> f64 {
        ulp(self.scale)
    }

    /// Upper bound on |value|.
    pub fn mag(&self) -> f64 {
        up(bigint_mag(&self.mant) * ulp(self.scale)) + self.err
    }

    pub fn add(&self, other: &Certified) -> Certified {
        debug_assert_eq!(self.scale, other.scale);
        Certified {
            mant: &self.mant + &other.mant,
            scale: self.scale,
            err: up(self.err + other.err),
        }
    }

    pub fn sub(&self, other: &Certified) -> Certified {
        debug_assert_eq!(self.scale, other.scale);
        Certified {
            mant: &self.mant - &other.mant,
            scale: self.scale,
            err: up(self.err + other.err),
        }
    }

    pub fn neg(&self) -> Certified {
        Certified {
            mant: -&self.mant,
            scale: self.scale,
            err: self.err,
        }
    }

    pub fn mul(&self, other: &Certified) -> Certified {
        debug_assert_eq!(self.scale, other.scale);
        let mant = (&self.mant * &other.mant) >> self.scale;
        let err = up(self.mag() * other.err + other.mag() * self.err + ulp(self.scale));
        Certified {
            mant,
            scale: self.scale,
            err,
        }
    }

    /// Divide by a positive integer.
    pub fn div_u64(&self, n: u64) -> Certified {
        debug_assert!(n > 0);
        Certified {
            mant: &self.mant / BigInt::from(n),
            scale: self.scale,
            err: up(self.err / n as f64 + ulp(self.scale)),
        }
    }

    /// Multiply by an exact rational.
    pub fn mul_rat(&self, r: &Rat) -> Certified {
        let mant = (&self.mant * r.numer()) / r.denom();
        let rf = crate::exact::rational::rat_to_f64(&r.abs());
        Certified {
            mant,
            scale: self.scale,
            err: up(self.err * up(rf) + ulp(self.scale)),
        }
    }

    /// Halve n times (exact shift).
    pub fn shr(&self, n: u32) -> Certified {
        Certified {
            mant: &self.mant >> n,
            scale: self.scale,
            err: up(self.err / 2f64.powi(n.min(1000) as i32) + ulp(self.scale)),
        }
    }

    pub fn to_f64(&self) -> f64 {
        let neg = self.mant.sign() == Sign::Minus;
        let m = bigint_mag(&self.mant) * ulp(self.scale);
        if neg {
            -m
        } else {
            m
        }
    }

    /// Decimal string with `digits` fractional digits (truncated).
    pub fn to_decimal_string(&self, digits: u32) -> String {
        let neg = self.mant.is_negative();
        let abs = self.mant.abs();
        let pow10 = BigInt::from(10u32).pow(digits);
        let scaled = (&abs * &pow10) >> self.scale;
        let int_part = &scaled / &pow10;
        let frac_part = &scaled % &pow10;
        let frac_str = format!("{:0width$}", frac_part, width = digits as usize);
        format!("{}{}.{}", if neg { "-" } else { "" }, int_part, frac_str)
    }
}

pub(crate) fn ulp(scale: u32) -> f64 {
    2f64.powi(-(scale.min(2000) as i32))
}

fn bigint_mag(n: &BigInt) -> f64 {
    let (_, digits) = n.to_u64_digits();
    let mut x = 0.0f64;
    for &d in digits.iter().rev() {
        x = x * 1.8446744073709552e19 + d as f64;
        if x > 1e300 {
            return 1e300;
        }
    }
    x
}

/// Pi at the given scale, by Machin's formula with certified tails.
pub fn pi(scale: u32) -> Certified {
    // pi = 16 atan(1/5) - 4 atan(1/239)
    let a = atan_inv(5, scale);
    let b = atan_inv(239, scale);
    let mut out = Certified {
        mant: (a.mant << 4) - (b.mant << 2),
        scale,
        err: up(16.0 * a.err + 4.0 * b.err),
    };
    out.err = up(out.err);
    out
}

/// atan(1/k) for integer k >= 2, alternating series with tail bound.
fn atan_inv(k: u64, scale: u32) -> Certified {
    let one = BigInt::from(1) << scale;
    let k2 = BigInt::from(k) * BigInt::from(k);
    let mut power = &one / BigInt::from(k); // (1/k)^{2j+1} mantissa
    let mut acc = BigInt::zero();
    let mut j = 0u64;
    let mut ops = 0u64;
    loop {
        let term = &power / BigInt::from(2 * j + 1);
        if term.is_zero() {
            break;
        }
        if j % 2 == 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
        power = &power / &k2;
        j += 1;
        ops += 2;
        if j > 10_000 {
            break;
        }
    }
    // Truncation is below one ulp once terms vanish; each integer division
    // loses at most one ulp.
    Certified {
        mant: acc,
        scale,
        err: up((ops as f64 + 2.0) * ulp(scale)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    #[test]
    fn arithmetic_and_bounds() {
        let s = 128;
        let a = Certified::from_rat(&rat(1, 3), s);
        let b = Certified::from_rat(&rat(3, 7), s);
        let p = a.mul(&b);
        assert!((p.to_f64() - 1.0 / 7.0).abs() < 1e-30 + p.err);
        assert!(p.err < 1e-35);
        let q = a.add(&b).sub(&b);
        assert!((q.to_f64() - 1.0 / 3.0).abs() <= q.err + 1e-30);
    }

    #[test]
    fn pi_value() {
        let p = pi(160);
        assert!(p.err < 1e-40);
        assert!((p.to_f64() - std::f64::consts::PI).abs() < 1e-15);
        let s = p.to_decimal_string(30);
        assert!(s.starts_with("3.141592653589793238462643383279"));
    }

    #[test]
    fn decimal_strings() {
        let x = Certified::from_rat(&rat(-1, 4), 96);
        assert_eq!(x.to_decimal_string(4), "-0.2500");
        let y = Certified::from_i64(42, 96);
        assert_eq!(y.to_decimal_string(2), "42.00");
    }
}
