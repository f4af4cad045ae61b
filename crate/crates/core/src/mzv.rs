//! Multiple zeta value indices, rational combinations of them, and the
//! harmonic (stuffle) product.
//!
//! Index convention (innermost summation variable first):
//! `zeta(k_1, ..., k_r) = sum_{0 < n_1 < ... < n_r} prod n_i^{-k_i}` with
//! `k_r >= 2` for convergence. The opposite convention is also common in the
//! literature; everything in this crate uses the one above. The empty index
//! denotes the number 1 (weight 0, depth 0).

use crate::exact::rational::{rat_from_str, rat_to_string, Rat};
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

/// Admissibility test on a raw tuple: all parts >= 1 and, if nonempty, the
/// last part >= 2.
pub fn is_admissible(parts: &[i64]) -> bool {
    if parts.is_empty() {
        return true;
    }
    parts.iter().all(|&k| k >= 1) && *parts.last().unwrap() >= 2
}

/// An admissible multiple zeta index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MzvIndex {
    parts: Vec<u32>,
}

impl MzvIndex {
    /// The empty index, denoting the number 1.
    pub fn empty() -> Self {
        MzvIndex { parts: vec![] }
    }

    pub fn new(parts: Vec<u32>) -> Option<Self> {
        let raw: Vec<i64> = parts.iter().map(|&k| k as i64).collect();
        if is_admissible(&raw) {
            Some(MzvIndex { parts })
        } else {
            None
        }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn depth(&self) -> u32 {
        self.parts.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

impl fmt::Display for MzvIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "zeta(")?;
        for (i, k) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", k)?;
        }
        write!(f, ")")
    }
}

/// A finite rational-weighted combination of admissible indices.
///
/// Zero coefficients are never stored. Combinations are not reduced modulo
/// known MZV linear relations; equality of reductions is certified numerically
/// or by exact agreement.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MzvCombination {
    terms: BTreeMap<MzvIndex, Rat>,
}

impl MzvCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The combination `c * zeta(index)`.
    pub fn single(index: MzvIndex, coeff: Rat) -> Self {
        let mut m = Self::zero();
        m.add_term(index, coeff);
        m
    }

    /// The rational constant `c` as `c * zeta()`.
    pub fn constant(c: Rat) -> Self {
        Self::single(MzvIndex::empty(), c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MzvIndex, &Rat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, index: &MzvIndex) -> Rat {
        self.terms.get(index).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, index: MzvIndex, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(index.clone()).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&index);
        }
    }

    pub fn add(&self, other: &MzvCombination) -> MzvCombination {
        let mut out = self.clone();
        for (i, c) in other.terms() {
            out.add_term(i.clone(), c.clone());
        }
        out
    }

    pub fn add_assign(&mut self, other: &MzvCombination) {
        for (i, c) in other.terms() {
            self.add_term(i.clone(), c.clone());
        }
    }

    pub fn scale(&self, s: &Rat) -> MzvCombination {
        if s.is_zero() {
            return Self::zero();
        }
        MzvCombination {
            terms: self
                .terms
                .iter()
                .map(|(i, c)| (i.clone(), c * s))
                .collect(),
        }
    }

    pub fn sub(&self, other: &MzvCombination) -> MzvCombination {
        let mut out = self.clone();
        for (i, c) in other.terms() {
            out.add_term(i.clone(), -c.clone());
        }
        out
    }

    pub fn max_weight(&self) -> u32 {
        self.terms.keys().map(|i| i.weight()).max().unwrap_or(0)
    }

    pub fn max_depth(&self) -> u32 {
        self.terms.keys().map(|i| i.depth()).max().unwrap_or(0)
    }
}

impl fmt::Display for MzvCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (i, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{} {}", rat_to_string(c), i)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    index: Vec<u32>,
    coeff: String,
}

impl Serialize for MzvCombination {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let v: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(i, c)| TermRepr {
                index: i.parts().to_vec(),
                coeff: rat_to_string(c),
            })
            .collect();
        v.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MzvCombination {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v: Vec<TermRepr> = Vec::deserialize(deserializer)?;
        let mut out = MzvCombination::zero();
        for t in v {
            let idx = MzvIndex::new(t.index)
                .ok_or_else(|| D::Error::custom("non-admissible MZV index"))?;
            let c = rat_from_str(&t.coeff)
                .ok_or_else(|| D::Error::custom("malformed rational coefficient"))?;
            out.add_term(idx, c);
        }
        Ok(out)
    }
}

/// Harmonic (stuffle) product: the combination C with
/// `zeta(a) * zeta(b) = sum C`, from splitting the double summation lattice
/// by order or tie of the two outer indices.
pub fn stuffle(a: &MzvIndex, b: &MzvIndex) -> MzvCombination {
    let raw = stuffle_raw(a.parts(), b.parts());
    let mut out = MzvCombination::zero();
    for (parts, mult) in raw {
        let idx = MzvIndex::new(parts).expect("stuffle of admissible indices is admissible");
        out.add_term(idx, Rat::from_integer(mult.into()));
    }
    out
}

fn stuffle_raw(a: &[u32], b: &[u32]) -> BTreeMap<Vec<u32>, i64> {
    let mut out = BTreeMap::new();
    if a.is_empty() {
        out.insert(b.to_vec(), 1);
        return out;
    }
    if b.is_empty() {
        out.insert(a.to_vec(), 1);
        return out;
    }
    let (a_head, &a_last) = (&a[..a.len() - 1], a.last().unwrap());
    let (b_head, &b_last) = (&b[..b.len() - 1], b.last().unwrap());
    // Outer variable of a above outer of b, below, or tied.
    let mut push = |base: BTreeMap<Vec<u32>, i64>, last: u32, mult: i64| {
        for (mut parts, m) in base {
            parts.push(last);
            *out.entry(parts).or_insert(0) += m * mult;
        }
    };
    push(stuffle_raw(a_head, b), a_last, 1);
    push(stuffle_raw(a, b_head), b_last, 1);
    push(stuffle_raw(a_head, b_head), a_last + b_last, 1);
    out
}

/// All admissible indices of weight exactly `w` (w >= 0).
pub fn admissible_indices_of_weight(w: u32) -> Vec<MzvIndex> {
    let mut out = Vec::new();
    if w == 0 {
        out.push(MzvIndex::empty());
        return out;
    }
    fn rec(remaining: u32, acc: &mut Vec<u32>, out: &mut Vec<MzvIndex>) {
        if remaining == 0 {
            if let Some(idx) = MzvIndex::new(acc.clone()) {
                out.push(idx);
            }
            return;
        }
        for k in 1..=remaining {
            acc.push(k);
            rec(remaining - k, acc, out);
            acc.pop();
        }
    }
    rec(w, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat_i;

    #[test]
    fn admissibility() {
        assert!(is_admissible(&[2]));
        assert!(!is_admissible(&[1]));
        assert!(is_admissible(&[]));
        assert!(is_admissible(&[1, 2]));
        assert!(!is_admissible(&[2, 1]));
        assert!(!is_admissible(&[0, 2]));
    }

    #[test]
    fn weight_depth() {
        let i = MzvIndex::new(vec![1, 2]).unwrap();
        assert_eq!((i.weight(), i.depth()), (3, 2));
        let e = MzvIndex::empty();
        assert_eq!((e.weight(), e.depth()), (0, 0));
        let j = MzvIndex::new(vec![2, 3]).unwrap();
        assert_eq!((j.weight(), j.depth()), (5, 2));
    }

    #[test]
    fn stuffle_identity_element() {
        let x = MzvIndex::new(vec![3]).unwrap();
        let s = stuffle(&MzvIndex::empty(), &x);
        assert_eq!(s, MzvCombination::single(x, rat_i(1)));
    }

    #[test]
    fn stuffle_2_2() {
        // zeta(2)^2 = 2 zeta(2,2) + zeta(4)
        let two = MzvIndex::new(vec![2]).unwrap();
        let s = stuffle(&two, &two);
        assert_eq!(s.coeff(&MzvIndex::new(vec![2, 2]).unwrap()), rat_i(2));
        assert_eq!(s.coeff(&MzvIndex::new(vec![4]).unwrap()), rat_i(1));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn stuffle_2_3() {
        let two = MzvIndex::new(vec![2]).unwrap();
        let three = MzvIndex::new(vec![3]).unwrap();
        let s = stuffle(&two, &three);
        assert_eq!(s.coeff(&MzvIndex::new(vec![2, 3]).unwrap()), rat_i(1));
        assert_eq!(s.coeff(&MzvIndex::new(vec![3, 2]).unwrap()), rat_i(1));
        assert_eq!(s.coeff(&MzvIndex::new(vec![5]).unwrap()), rat_i(1));
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn stuffle_commutes_and_respects_weight() {
        let a = MzvIndex::new(vec![1, 2]).unwrap();
        let b = MzvIndex::new(vec![2, 2]).unwrap();
        let ab = stuffle(&a, &b);
        let ba = stuffle(&b, &a);
        assert_eq!(ab, ba);
        for (i, _) in ab.terms() {
            assert_eq!(i.weight(), a.weight() + b.weight());
            assert!(i.depth() <= a.depth() + b.depth());
        }
    }

    #[test]
    fn combination_algebra_drops_zeros() {
        let x = MzvIndex::new(vec![2]).unwrap();
        let mut c = MzvCombination::single(x.clone(), rat_i(3));
        c.add_term(x.clone(), rat_i(-3));
        assert!(c.is_zero());
    }

    #[test]
    fn json_round_trip() {
        let mut c = MzvCombination::zero();
        c.add_term(MzvIndex::new(vec![1, 3]).unwrap(), crate::exact::rat(5, 7));
        c.add_term(MzvIndex::empty(), rat_i(-2));
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("\"coeff\":\"5/7\""));
        let back: MzvCombination = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
