//! Partial-fraction decomposition over shifted integer poles, and harmonic
//! numbers.
//!
//! Decomposes f(u) / prod_j (u + i_j)^{k_j} into sum_j sum_m a_{j,m}/(u+i_j)^m
//! for pairwise distinct integer shifts i_j. When the total multiplicity
//! exceeds deg f by at least 2, the order-1 coefficients sum to zero.

use super::poly::Poly;
use super::rational::{rat_i, Rat};
use crate::error::ExactError;
use num_traits::Zero;

/// A pole `(u + shift)^multiplicity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PoleSpec {
    pub shift: i64,
    pub multiplicity: u32,
}

impl PoleSpec {
    pub fn new(shift: i64, multiplicity: u32) -> Self {
        assert!(multiplicity >= 1, "pole multiplicity must be >= 1");
        PoleSpec { shift, multiplicity }
    }
}

/// One summand `coefficient / (u + shift)^order` of a decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFractionTerm {
    pub shift: i64,
    pub order: u32,
    pub coefficient: Rat,
}

/// Decompose `f / prod (u + i_j)^{k_j}`.
///
/// Requires `deg f <= sum k_j - 1` and pairwise distinct shifts. Zero
/// coefficients are dropped from the result.
pub fn partial_fraction(
    f: &Poly,
    poles: &[PoleSpec],
) -> Result<Vec<PartialFractionTerm>, ExactError> {
    let total_mult: u32 = poles.iter().map(|p| p.multiplicity).sum();
    for (a, pa) in poles.iter().enumerate() {
        for pb in &poles[a + 1..] {
            if pa.shift == pb.shift {
                return Err(ExactError::DuplicatePole { shift: pa.shift });
            }
        }
    }
    if !f.is_zero() && f.degree() as u32 >= total_mult {
        return Err(ExactError::DegreeTooLarge {
            deg_f: f.degree(),
            total_mult,
        });
    }
    if f.is_zero() {
        return Ok(vec![]);
    }

    let mut out = Vec::new();
    for (j, pole) in poles.iter().enumerate() {
        let k = pole.multiplicity as usize;
        let a = rat_i(-pole.shift);
        // Series of f(a + eps) * prod_{j' != j} ((i_{j'} - i_j) + eps)^{-k_{j'}}
        // up to eps^{k-1}; coefficient of eps^{k-m} is a_{j,m}.
        let mut series = f.shift_series(&a, k - 1);
        for (j2, other) in poles.iter().enumerate() {
            if j2 == j {
                continue;
            }
            let base = rat_i(other.shift - pole.shift);
            let inv = inverse_power_series(&base, other.multiplicity, k - 1);
            series = mul_series(&series, &inv, k - 1);
        }
        for m in 1..=k {
            let c = series[k - m].clone();
            if !c.is_zero() {
                out.push(PartialFractionTerm {
                    shift: pole.shift,
                    order: m as u32,
                    coefficient: c,
                });
            }
        }
    }
    Ok(out)
}

/// Series of `(base + eps)^{-k}` up to `eps^order`.
fn inverse_power_series(base: &Rat, k: u32, order: usize) -> Vec<Rat> {
    // (base + eps)^{-k} = base^{-k} * sum_s binom(-k, s) (eps/base)^s
    let mut out = Vec::with_capacity(order + 1);
    let inv_base = rat_i(1) / base;
    let mut pow = inv_base.clone();
    for _ in 1..k {
        pow *= &inv_base;
    }
    // pow = base^{-k}
    let mut coeff = pow;
    out.push(coeff.clone());
    for s in 0..order {
        // binom(-k, s+1)/binom(-k, s) = (-k - s)/(s + 1)
        let ratio = rat_i(-(k as i64) - s as i64) / rat_i(s as i64 + 1);
        coeff = coeff * ratio * &inv_base;
        out.push(coeff.clone());
    }
    out
}

fn mul_series(a: &[Rat], b: &[Rat], order: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); order + 1];
    for (i, x) in a.iter().enumerate().take(order + 1) {
        for (j, y) in b.iter().enumerate() {
            if i + j > order {
                break;
            }
            out[i + j] += x * y;
        }
    }
    out
}

/// Harmonic number `H_n = sum_{m=1}^n 1/m`; `H_0 = 0`.
pub fn harmonic(n: i64) -> Result<Rat, ExactError> {
    if n < 0 {
        return Err(ExactError::NegativeArgument { n });
    }
    let mut acc = Rat::zero();
    for m in 1..=n {
        acc += rat_i(1) / rat_i(m);
    }
    Ok(acc)
}

/// Recombine a decomposition over the common denominator and compare with
/// `f / prod poles` as a polynomial identity. Testing oracle.
pub fn recombines_to(f: &Poly, poles: &[PoleSpec], terms: &[PartialFractionTerm]) -> bool {
    // Common denominator D = prod (u + i_j)^{k_j}.
    // Check: f == sum over terms of c * D / (u + shift)^order.
    let mut rhs = Poly::zero();
    for t in terms {
        let mut factor = Poly::constant(t.coefficient.clone());
        for p in poles {
            let reduce = if p.shift == t.shift { t.order } else { 0 };
            debug_assert!(reduce <= p.multiplicity);
            for _ in 0..(p.multiplicity - reduce) {
                factor = factor.mul(&Poly::linear(p.shift));
            }
        }
        rhs = rhs.add(&factor);
    }
    rhs == *f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    #[test]
    fn two_simple_poles() {
        // 1/((u+1)(u+3)) = (1/2)/(u+1) - (1/2)/(u+3)
        let terms = partial_fraction(
            &Poly::one(),
            &[PoleSpec::new(1, 1), PoleSpec::new(3, 1)],
        )
        .unwrap();
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0], PartialFractionTerm { shift: 1, order: 1, coefficient: rat(1, 2) });
        assert_eq!(terms[1], PartialFractionTerm { shift: 3, order: 1, coefficient: rat(-1, 2) });
    }

    #[test]
    fn numerator_cancels_pole() {
        // u/(u(u+2)) = 1/(u+2)
        let f = Poly::from_coeffs(vec![rat_i(0), rat_i(1)]);
        let terms =
            partial_fraction(&f, &[PoleSpec::new(0, 1), PoleSpec::new(2, 1)]).unwrap();
        assert_eq!(
            terms,
            vec![PartialFractionTerm { shift: 2, order: 1, coefficient: rat_i(1) }]
        );
    }

    #[test]
    fn double_pole() {
        // 1/(u^2 (u+1)) = 1/u^2 - 1/u + 1/(u+1)
        let terms = partial_fraction(
            &Poly::one(),
            &[PoleSpec::new(0, 2), PoleSpec::new(1, 1)],
        )
        .unwrap();
        let expect = vec![
            PartialFractionTerm { shift: 0, order: 1, coefficient: rat_i(-1) },
            PartialFractionTerm { shift: 0, order: 2, coefficient: rat_i(1) },
            PartialFractionTerm { shift: 1, order: 1, coefficient: rat_i(1) },
        ];
        for e in &expect {
            assert!(terms.contains(e), "missing {:?} in {:?}", e, terms);
        }
        assert_eq!(terms.len(), 3);
        assert!(recombines_to(
            &Poly::one(),
            &[PoleSpec::new(0, 2), PoleSpec::new(1, 1)],
            &terms
        ));
    }

    #[test]
    fn order_one_coefficients_sum_to_zero() {
        // deg gap >= 2 forces residue sum zero.
        let f = Poly::from_coeffs(vec![rat_i(3), rat_i(1)]); // u + 3
        let poles = [PoleSpec::new(-1, 2), PoleSpec::new(2, 1), PoleSpec::new(5, 2)];
        let terms = partial_fraction(&f, &poles).unwrap();
        let s: Rat = terms
            .iter()
            .filter(|t| t.order == 1)
            .map(|t| t.coefficient.clone())
            .sum();
        assert!(s.is_zero());
        assert!(recombines_to(&f, &poles, &terms));
    }

    #[test]
    fn rejects_bad_inputs() {
        let f = Poly::from_coeffs(vec![rat_i(1), rat_i(1), rat_i(1)]);
        assert_eq!(
            partial_fraction(&f, &[PoleSpec::new(0, 1), PoleSpec::new(1, 1)]),
            Err(ExactError::DegreeTooLarge { deg_f: 2, total_mult: 2 })
        );
        assert_eq!(
            partial_fraction(&Poly::one(), &[PoleSpec::new(3, 1), PoleSpec::new(3, 2)]),
            Err(ExactError::DuplicatePole { shift: 3 })
        );
    }

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic(0).unwrap(), rat_i(0));
        assert_eq!(harmonic(2).unwrap(), rat(3, 2));
        assert_eq!(harmonic(4).unwrap(), rat(25, 12));
        assert!(harmonic(-1).is_err());
    }
}
