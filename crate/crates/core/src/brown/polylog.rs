//! Polylogarithm and logarithm integrands over the simplex: rewriting
//! products of one-variable multiple polylogarithms (at `t` and `1-t`) and
//! logarithm powers of differences into Brown integrands via path shuffles,
//! path splitting, and chamber decomposition over permutations.

use super::BrownIntegrand;
use crate::error::BrownError;
use crate::exact::rational::{factorial, rat_i, Rat};
use std::collections::BTreeMap;

/// Anchor of a one-variable polylog factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Anchor {
    /// `Li_{k}(t)`: path from 0 to t.
    AtZero,
    /// `Li_{k}(1-t)`: path from t to 1 after reflection.
    AtOne,
}

/// A one-variable multiple polylogarithm factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiWord {
    pub index: Vec<u32>,
    pub anchor: Anchor,
}

/// All polylog data attached to one simplex variable:
/// `t^{-m} (1-t)^{-n} * prod Li-words`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PolylogMonomial {
    /// `(m, n)` meaning the prefactor `t^{-m} (1-t)^{-n}`.
    pub laurent: (i64, i64),
    pub li_factors: Vec<LiWord>,
}

/// A difference-anchored factor `(t_j - t_i)^{-power} * (Li_1(1-s))^{log_power}`
/// at `s = t_j - t_i` (note `Li_1(1-s) = -log s`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceFactor {
    /// `(i, j)` with `i < j`, 0-based.
    pub pair: (usize, usize),
    pub power: i64,
    pub log_power: u32,
}

/// Letters of expanded paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PathLetter {
    /// du/u
    InvU,
    /// du/(1-u)
    InvOneMinusU,
    /// du/(u - t_i)
    InvUMinusT(usize),
}

/// A path of ordered letters confined to one side of a simplex variable.
#[derive(Clone, Debug)]
struct Path {
    /// (variable, above?): below = (0, t_var), above = (t_var, 1).
    var: usize,
    above: bool,
    letters: Vec<PathLetter>,
}

/// One slot of a chamber's total variable order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChamberSlot {
    /// An original simplex variable.
    Simplex(usize),
    /// The `index`-th letter of the path below/above simplex variable `var`.
    Path { var: usize, above: bool, index: usize },
}

/// One chamber of the final decomposition: the permutation interleaving the
/// simplex variables and path variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolylogChamber {
    /// The full variable order of the open simplex.
    pub order: Vec<ChamberSlot>,
    /// Positions of the original simplex variables in the chamber order.
    pub t_positions: Vec<usize>,
    /// Total number of variables in the chamber.
    pub size: usize,
}

/// All interleavings (shuffles) of two words.
pub fn shuffle_words<T: Clone>(a: &[T], b: &[T]) -> Vec<Vec<T>> {
    if a.is_empty() {
        return vec![b.to_vec()];
    }
    if b.is_empty() {
        return vec![a.to_vec()];
    }
    let mut out = Vec::new();
    for mut w in shuffle_words(&a[1..], b) {
        w.insert(0, a[0].clone());
        out.push(w);
    }
    for mut w in shuffle_words(a, &b[1..]) {
        w.insert(0, b[0].clone());
        out.push(w);
    }
    out
}

fn li_word_letters(w: &LiWord) -> Result<Vec<PathLetter>, BrownError> {
    if w.index.is_empty() || w.index.iter().any(|&k| k == 0) {
        return Err(BrownError::UnsupportedFactor(format!(
            "polylog index {:?}",
            w.index
        )));
    }
    // Li_{k_1..k_u}(z): y at block starts, x inside blocks (path from 0).
    let mut letters = Vec::new();
    for &k in &w.index {
        letters.push(true); // y
        for _ in 1..k {
            letters.push(false); // x
        }
    }
    let out = match w.anchor {
        Anchor::AtZero => letters
            .iter()
            .map(|&y| {
                if y {
                    PathLetter::InvOneMinusU
                } else {
                    PathLetter::InvU
                }
            })
            .collect(),
        Anchor::AtOne => letters
            .iter()
            .rev()
            .map(|&y| {
                if y {
                    PathLetter::InvU
                } else {
                    PathLetter::InvOneMinusU
                }
            })
            .collect(),
    };
    Ok(out)
}

/// Expand products of polylog factors and difference factors into a sum of
/// Brown integrands over chambers (open simplices of the joint variable
/// order). The weighted sum of chamber integrals equals the original
/// integral; measure-zero ties are discarded.
pub fn expand_polylog_integrand(
    monomials: &[PolylogMonomial],
    diffs: &[DifferenceFactor],
) -> Result<Vec<(Rat, PolylogChamber, BrownIntegrand)>, BrownError> {
    let n = monomials.len();
    if n == 0 {
        return Err(BrownError::UnsupportedFactor("empty variable list".into()));
    }
    for d in diffs {
        let (i, j) = d.pair;
        if i >= j || j >= n {
            return Err(BrownError::UnsupportedFactor(format!(
                "difference pair {:?}",
                d.pair
            )));
        }
    }

    // Base exponents from the Laurent prefactors and difference powers.
    let base_a: Vec<i64> = monomials.iter().map(|m| -m.laurent.0).collect();
    let base_b: Vec<i64> = monomials.iter().map(|m| -m.laurent.1).collect();
    let mut base_c: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for d in diffs {
        if d.power != 0 {
            *base_c.entry(d.pair).or_insert(0) += -d.power;
        }
    }

    // Candidate path sets: each difference log power splits into l+1 pieces;
    // collect the cartesian product of the choices, then shuffle same-segment
    // paths together.
    // Anchored polylog paths first.
    let mut fixed_paths: Vec<Path> = Vec::new();
    let mut coeff = rat_i(1);
    for (var, m) in monomials.iter().enumerate() {
        for w in &m.li_factors {
            let letters = li_word_letters(w)?;
            fixed_paths.push(Path {
                var,
                above: matches!(w.anchor, Anchor::AtOne),
                letters,
            });
        }
    }
    // Difference log paths: (Li_1(1-s))^l at s = t_j - t_i equals
    // l! * I_{(t_j-t_i, 1)}(du/u, ..., du/u); split each at 1 - t_i.
    struct DiffChoice {
        var_i: usize,
        var_j: usize,
        total: u32,
    }
    let mut diff_choices: Vec<DiffChoice> = Vec::new();
    for d in diffs {
        if d.log_power > 0 {
            coeff *= factorial(d.log_power);
            diff_choices.push(DiffChoice {
                var_i: d.pair.0,
                var_j: d.pair.1,
                total: d.log_power,
            });
        }
    }

    let mut variants: Vec<(Rat, Vec<Path>)> = vec![(coeff, fixed_paths)];
    for ch in &diff_choices {
        let mut next = Vec::new();
        for (c0, paths) in &variants {
            for q in 0..=ch.total {
                // q letters stay on (t_j, 1) as du/(u - t_i); the rest become
                // du/(1-u) on (0, t_i).
                let mut paths2 = paths.clone();
                if q > 0 {
                    paths2.push(Path {
                        var: ch.var_j,
                        above: true,
                        letters: vec![PathLetter::InvUMinusT(ch.var_i); q as usize],
                    });
                }
                if q < ch.total {
                    paths2.push(Path {
                        var: ch.var_i,
                        above: false,
                        letters: vec![PathLetter::InvOneMinusU; (ch.total - q) as usize],
                    });
                }
                next.push((c0.clone(), paths2));
            }
        }
        variants = next;
    }

    // Shuffle same-segment paths into single sequences.
    let mut shuffled: Vec<(Rat, Vec<Path>)> = Vec::new();
    for (c0, paths) in variants {
        let mut segments: BTreeMap<(usize, bool), Vec<Vec<PathLetter>>> = BTreeMap::new();
        for p in paths {
            segments
                .entry((p.var, p.above))
                .or_default()
                .push(p.letters);
        }
        let mut acc: Vec<(Rat, Vec<Path>)> = vec![(c0, Vec::new())];
        for ((var, above), words) in segments {
            let mut merged: Vec<Vec<PathLetter>> = vec![Vec::new()];
            for w in words {
                let mut next = Vec::new();
                for m in &merged {
                    next.extend(shuffle_words(m, &w));
                }
                merged = next;
            }
            let mut next = Vec::new();
            for (c, ps) in &acc {
                for m in &merged {
                    let mut ps2 = ps.clone();
                    ps2.push(Path {
                        var,
                        above,
                        letters: m.clone(),
                    });
                    next.push((c.clone(), ps2));
                }
            }
            acc = next;
        }
        shuffled.extend(acc);
    }

    // Chamber decomposition: enumerate linear extensions of the partial order.
    let mut out = Vec::new();
    for (c0, paths) in shuffled {
        for order in linear_extensions(n, &paths) {
            let total = order.len();
            let mut t_pos = vec![0usize; n];
            for (pos, item) in order.iter().enumerate() {
                if let Item::T(i) = item {
                    t_pos[*i] = pos;
                }
            }
            let mut a = vec![0i64; total];
            let mut b = vec![0i64; total];
            let mut c: BTreeMap<(usize, usize), i64> = BTreeMap::new();
            for i in 0..n {
                a[t_pos[i]] += base_a[i];
                b[t_pos[i]] += base_b[i];
            }
            for (&(i, j), &e) in &base_c {
                let (p, q) = (t_pos[i], t_pos[j]);
                debug_assert!(p < q);
                *c.entry((p, q)).or_insert(0) += e;
            }
            for (pos, item) in order.iter().enumerate() {
                if let Item::Letter(l, _, _) = item {
                    match l {
                        PathLetter::InvU => a[pos] -= 1,
                        PathLetter::InvOneMinusU => b[pos] -= 1,
                        PathLetter::InvUMinusT(i) => {
                            let p = t_pos[*i];
                            debug_assert!(p < pos);
                            *c.entry((p, pos)).or_insert(0) += -1;
                        }
                    }
                }
            }
            let slots: Vec<ChamberSlot> = order
                .iter()
                .map(|item| match item {
                    Item::T(i) => ChamberSlot::Simplex(*i),
                    Item::Letter(_, pi, idx) => ChamberSlot::Path {
                        var: paths[*pi].var,
                        above: paths[*pi].above,
                        index: *idx,
                    },
                })
                .collect();
            let integrand = BrownIntegrand::new(a, b, c).expect("valid chamber integrand");
            out.push((
                c0.clone(),
                PolylogChamber {
                    order: slots,
                    t_positions: t_pos.clone(),
                    size: total,
                },
                integrand,
            ));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
enum Item {
    T(usize),
    Letter(PathLetter, usize, usize),
}

/// Enumerate all total orders of the simplex variables and path letters
/// compatible with: the t-chain order, each path's internal order, and each
/// path's bounds (below t_var / above t_var).
fn linear_extensions(n: usize, paths: &[Path]) -> Vec<Vec<Item>> {
    let mut out = Vec::new();
    let mut state: Vec<usize> = vec![0; paths.len()];
    let mut placed_t = 0usize;
    let total: usize = n + paths.iter().map(|p| p.letters.len()).sum::<usize>();
    let mut current: Vec<Item> = Vec::with_capacity(total);
    extend(
        n,
        paths,
        &mut state,
        &mut placed_t,
        &mut current,
        total,
        &mut out,
    );
    out
}

fn extend(
    n: usize,
    paths: &[Path],
    state: &mut Vec<usize>,
    placed_t: &mut usize,
    current: &mut Vec<Item>,
    total: usize,
    out: &mut Vec<Vec<Item>>,
) {
    if current.len() == total {
        out.push(current.clone());
        return;
    }
    // Option 1: place the next simplex variable, allowed when all below-paths
    // of that variable are exhausted.
    if *placed_t < n {
        let k = *placed_t;
        let ok = paths
            .iter()
            .enumerate()
            .all(|(pi, p)| p.above || p.var != k || state[pi] == p.letters.len());
        if ok {
            current.push(Item::T(k));
            *placed_t += 1;
            extend(n, paths, state, placed_t, current, total, out);
            *placed_t -= 1;
            current.pop();
        }
    }
    // Option 2: place the next letter of some path.
    for pi in 0..paths.len() {
        let p = &paths[pi];
        if state[pi] == p.letters.len() {
            continue;
        }
        // below-paths may place letters only before their variable;
        // above-paths only after.
        let var_placed = p.var < *placed_t;
        if p.above != var_placed {
            continue;
        }
        let letter = p.letters[state[pi]];
        current.push(Item::Letter(letter, pi, state[pi]));
        state[pi] += 1;
        extend(n, paths, state, placed_t, current, total, out);
        state[pi] -= 1;
        current.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brown::{brown_convergent, reduce_brown};
    use crate::exact::rational::rat;
    use crate::mzv::{MzvCombination, MzvIndex};

    #[test]
    fn shuffle_cardinality() {
        let a = [1, 2];
        let b = [3, 4, 5];
        assert_eq!(shuffle_words(&a, &b).len(), 10); // binom(5,2)
        let a = [1];
        let b = [2];
        assert_eq!(shuffle_words(&a, &b).len(), 2);
    }

    #[test]
    fn log_one_minus_t_integral() {
        // int_0^1 log(1-t) dt = -int Li_1(t) = -1.
        // Li_1(t) path below t: one InvOneMinusU letter.
        let mono = PolylogMonomial {
            laurent: (0, 0),
            li_factors: vec![LiWord {
                index: vec![1],
                anchor: Anchor::AtZero,
            }],
        };
        let parts = expand_polylog_integrand(&[mono], &[]).unwrap();
        assert_eq!(parts.len(), 1);
        let (c, _, integrand) = &parts[0];
        assert_eq!(c, &rat_i(1));
        assert_eq!(integrand.size(), 2);
        // integrand: u < t with 1/(1-u): a = (0,0), b = (-1,0)
        assert_eq!(integrand.a_exp(), &[0, 0]);
        assert_eq!(integrand.b_exp(), &[-1, 0]);
        let total = reduce_brown(integrand).unwrap().scale(c);
        // value of int Li_1(t) dt = 1, so log(1-t) integral is -1
        assert_eq!(total, MzvCombination::constant(rat_i(1)));
    }

    #[test]
    fn log_t_integral() {
        // int_0^1 log t dt = -1 via Li_1(1-t) = -log t.
        let mono = PolylogMonomial {
            laurent: (0, 0),
            li_factors: vec![LiWord {
                index: vec![1],
                anchor: Anchor::AtOne,
            }],
        };
        let parts = expand_polylog_integrand(&[mono], &[]).unwrap();
        assert_eq!(parts.len(), 1);
        let (c, _, integrand) = &parts[0];
        // path above t: u > t with du/u: a = (0, -1)
        assert_eq!(integrand.a_exp(), &[0, -1]);
        let v = reduce_brown(integrand).unwrap().scale(c);
        assert_eq!(v, MzvCombination::constant(rat_i(1)));
    }

    #[test]
    fn log_product_integral() {
        // int_0^1 log t log(1-t) dt = 2 - zeta(2):
        // (-Li_1(1-t)) * (-Li_1(t)) = Li_1(1-t) Li_1(t).
        let mono = PolylogMonomial {
            laurent: (0, 0),
            li_factors: vec![
                LiWord {
                    index: vec![1],
                    anchor: Anchor::AtOne,
                },
                LiWord {
                    index: vec![1],
                    anchor: Anchor::AtZero,
                },
            ],
        };
        let parts = expand_polylog_integrand(&[mono], &[]).unwrap();
        // one below-letter, one above-letter: single chamber v < t < u
        assert_eq!(parts.len(), 1);
        let mut total = MzvCombination::zero();
        for (c, _, integrand) in &parts {
            assert!(brown_convergent(integrand));
            total.add_assign(&reduce_brown(integrand).unwrap().scale(c));
        }
        let mut expect = MzvCombination::constant(rat_i(2));
        expect.add_term(MzvIndex::new(vec![2]).unwrap(), rat_i(-1));
        assert_eq!(total, expect);
    }

    #[test]
    fn difference_log_three_way_split() {
        // One log(t2 - t1) factor: l = 1 splits into a (t_j, 1) piece with
        // du/(u - t_i) and a (0, t_i) piece with du/(1-u).
        let monos = vec![PolylogMonomial::default(), PolylogMonomial::default()];
        let diffs = vec![DifferenceFactor {
            pair: (0, 1),
            power: 0,
            log_power: 1,
        }];
        let parts = expand_polylog_integrand(&monos, &diffs).unwrap();
        // q=1: u above t2 (one chamber); q=0: v below t1 (one chamber).
        assert_eq!(parts.len(), 2);
        // chamber integrals sum to int int log(t2-t1) * (-1):
        // int_{t1<t2} -log(t2-t1) = 3/4... direct: int int -log(t2-t1) over
        // simplex = 3/4. Verify numerically through reduce_brown.
        let mut total = MzvCombination::zero();
        for (c, _, integrand) in &parts {
            total.add_assign(&reduce_brown(integrand).unwrap().scale(c));
        }
        assert_eq!(total, MzvCombination::constant(rat(3, 4)));
    }

    #[test]
    fn rejects_bad_factors() {
        let mono = PolylogMonomial {
            laurent: (0, 0),
            li_factors: vec![LiWord {
                index: vec![],
                anchor: Anchor::AtZero,
            }],
        };
        assert!(matches!(
            expand_polylog_integrand(&[mono], &[]),
            Err(BrownError::UnsupportedFactor(_))
        ));
    }
}
