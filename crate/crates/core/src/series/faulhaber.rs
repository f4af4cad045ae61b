//! Faulhaber power-sum polynomials and fiber sums over compositions.

use crate::exact::poly::Poly;
use crate::exact::rational::{binomial, rat_i, Rat};
use num_traits::Zero;

/// The polynomial `F_e` with `F_e(x) = sum_{k=1}^{x} k^e` for integer x >= 0.
pub fn power_sum_poly(e: u32) -> Poly {
    // (x+1)^{e+1} - 1 = sum_{j=0}^{e} binom(e+1, j) F_j(x)
    let mut cache: Vec<Poly> = Vec::with_capacity(e as usize + 1);
    for d in 0..=e {
        // lhs = (x+1)^{d+1} - 1
        let xp1 = Poly::from_coeffs(vec![rat_i(1), rat_i(1)]);
        let mut lhs = Poly::one();
        for _ in 0..=d {
            lhs = lhs.mul(&xp1);
        }
        lhs = lhs.add(&Poly::constant(rat_i(-1)));
        for (j, fj) in cache.iter().enumerate() {
            let c = binomial(d as i64 + 1, j as u32);
            lhs = lhs.add(&fj.scale(&(-c)));
        }
        let inv = rat_i(1) / binomial(d as i64 + 1, d);
        cache.push(lhs.scale(&inv));
    }
    cache.pop().unwrap()
}

/// Fiber sum over compositions: the polynomial `Phi(g)` with
/// `Phi(g) = sum_{n_1 + ... + n_s = g, n_i >= 1} prod n_i^{e_i}`
/// for integer `g >= s`. For all-zero exponents this is `binom(g-1, s-1)`.
pub fn fiber_sum_poly(exponents: &[u32]) -> Poly {
    assert!(!exponents.is_empty());
    if exponents.len() == 1 {
        // g^{e}
        let mut coeffs = vec![Rat::zero(); exponents[0] as usize + 1];
        coeffs[exponents[0] as usize] = rat_i(1);
        return Poly::from_coeffs(coeffs);
    }
    let inner = fiber_sum_poly(&exponents[1..]);
    let e1 = exponents[0];
    let s = exponents.len();
    // sum_{n=1}^{g-(s-1)} n^{e1} * inner(g - n)
    // Expand inner(g - n) in powers of n, then sum with Faulhaber at g-s+1.
    // inner(g - n) = sum_k inner_k (g - n)^k = sum_j c_j(g) n^j.
    let mut result = Poly::zero();
    for (k, ck) in inner.coeffs().iter().enumerate() {
        if ck.is_zero() {
            continue;
        }
        // (g-n)^k = sum_j binom(k, j) g^{k-j} (-n)^j
        for j in 0..=k {
            let c = ck * binomial(k as i64, j as u32) * rat_i(if j % 2 == 0 { 1 } else { -1 });
            // contributes c * g^{k-j} * sum_{n=1}^{g-s+1} n^{e1+j}
            let fs = power_sum_poly(e1 + j as u32);
            // compose F at (g - (s-1))
            let arg = Poly::from_coeffs(vec![rat_i(-(s as i64 - 1)), rat_i(1)]);
            let mut comp = Poly::zero();
            for (d, fc) in fs.coeffs().iter().enumerate() {
                let mut pw = Poly::one();
                for _ in 0..d {
                    pw = pw.mul(&arg);
                }
                comp = comp.add(&pw.scale(fc));
            }
            // multiply by g^{k-j}
            let mut gpow = vec![Rat::zero(); k - j + 1];
            gpow[k - j] = c;
            comp = comp.mul(&Poly::from_coeffs(gpow));
            result = result.add(&comp);
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    #[test]
    fn power_sums() {
        let f1 = power_sum_poly(1); // x(x+1)/2
        assert_eq!(f1.eval(&rat_i(4)), rat_i(10));
        let f2 = power_sum_poly(2);
        assert_eq!(f2.eval(&rat_i(3)), rat_i(14));
        let f0 = power_sum_poly(0);
        assert_eq!(f0.eval(&rat_i(7)), rat_i(7));
        assert_eq!(f1.eval(&rat_i(0)), rat_i(0));
        let f5 = power_sum_poly(5);
        assert_eq!(f5.eval(&rat_i(3)), rat_i(1 + 32 + 243));
    }

    #[test]
    fn fiber_sums_count_compositions() {
        // all-zero exponents: binom(g-1, s-1)
        let p = fiber_sum_poly(&[0, 0, 0]);
        assert_eq!(p.eval(&rat_i(5)), rat_i(6)); // binom(4,2)
        assert_eq!(p.eval(&rat_i(3)), rat_i(1));
        // brute force with exponents
        let p = fiber_sum_poly(&[2, 1]);
        for g in 2..8i64 {
            let mut brute = rat(0, 1);
            for n1 in 1..g {
                let n2 = g - n1;
                brute += rat_i(n1 * n1 * n2);
            }
            assert_eq!(p.eval(&rat_i(g)), brute, "g={}", g);
        }
        let p = fiber_sum_poly(&[1, 0, 2]);
        for g in 3..9i64 {
            let mut brute = rat(0, 1);
            for n1 in 1..g {
                for n2 in 1..(g - n1) {
                    let n3 = g - n1 - n2;
                    if n3 >= 1 {
                        brute += rat_i(n1 * n3 * n3);
                    }
                }
            }
            assert_eq!(p.eval(&rat_i(g)), brute, "g={}", g);
        }
    }
}
