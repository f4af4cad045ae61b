//! Property tests for the spec-level invariants.

use proptest::prelude::*;
use zetareduce::exact::{harmonic, partial_fraction, rat_i, Poly, PoleSpec, Rat};
use zetareduce::*;

fn arb_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-9i64..=9, 1..=max_deg + 1)
        .prop_map(|cs| Poly::from_coeffs(cs.into_iter().map(rat_i).collect()))
}

fn arb_poles() -> impl Strategy<Value = Vec<PoleSpec>> {
    prop::collection::btree_map(-6i64..=6, 1u32..=3, 1..=4).prop_map(|m| {
        m.into_iter()
            .map(|(s, k)| PoleSpec::new(s, k))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// Recombining a partial fraction decomposition over the common
    /// denominator reproduces the numerator exactly, and the order-1
    /// coefficients vanish when the degree gap is at least 2.
    #[test]
    fn partial_fraction_recombines(f in arb_poly(6), poles in arb_poles()) {
        let total: u32 = poles.iter().map(|p| p.multiplicity).sum();
        prop_assume!(!f.is_zero());
        prop_assume!((f.degree() as u32) < total);
        let terms = partial_fraction(&f, &poles).unwrap();
        prop_assert!(zetareduce::exact::pfrac::recombines_to(&f, &poles, &terms));
        if total as i64 - f.degree() as i64 >= 2 {
            let s: Rat = terms
                .iter()
                .filter(|t| t.order == 1)
                .map(|t| t.coefficient.clone())
                .sum();
            prop_assert!(num_traits::Zero::is_zero(&s));
        }
    }

    /// H(n) - H(n-1) = 1/n.
    #[test]
    fn harmonic_difference(n in 1i64..=400) {
        let d = harmonic(n).unwrap() - harmonic(n - 1).unwrap();
        prop_assert_eq!(d, Rat::new(1.into(), n.into()));
    }

    /// Stuffle commutes, preserves weight, and bounds depth.
    #[test]
    fn stuffle_properties(a in arb_index(), b in arb_index()) {
        let ab = stuffle(&a, &b);
        let ba = stuffle(&b, &a);
        prop_assert_eq!(&ab, &ba);
        for (idx, _) in ab.terms() {
            prop_assert_eq!(idx.weight(), a.weight() + b.weight());
            prop_assert!(idx.depth() <= a.depth() + b.depth());
        }
    }

    /// Reduction output obeys the weight and depth bounds and the base case.
    #[test]
    fn shifted_reduction_bounds(
        shifts in prop::collection::vec(-3i64..=3, 1..=3),
        raw_exps in prop::collection::vec(1u32..=3, 1..=3),
    ) {
        prop_assume!(shifts.len() == raw_exps.len());
        let mut exps = raw_exps;
        let last = exps.len() - 1;
        exps[last] = exps[last].max(2);
        let total: u32 = exps.iter().sum();
        prop_assume!(total <= 6);
        let s = ShiftedSeries::new(shifts, exps.clone()).unwrap();
        prop_assume!(shifted_series_convergent(&s));
        let c = reduce_shifted(&s).unwrap();
        prop_assert!(c.max_weight() <= total);
        prop_assert!(c.max_depth() as usize <= s.depth());
        if s.summation_changing_number() == 0 {
            let idx = MzvIndex::new(exps).unwrap();
            prop_assert_eq!(c, MzvCombination::single(idx, rat_i(1)));
        }
    }

    /// Every lattice point lies in exactly one chamber.
    #[test]
    fn chamber_partition(d in 1usize..=4, point in prop::collection::vec(1i64..=20, 4)) {
        let p = &point[..d];
        let chambers = chamber_decompose(d);
        let hits = chambers.iter().filter(|c| c.contains(p)).count();
        prop_assert_eq!(hits, 1);
    }

    /// The classical-word pattern reduces to exactly one index with
    /// coefficient one, by both algorithms.
    #[test]
    fn classical_words_single_index(parts in prop::collection::vec(1u32..=3, 1..=3)) {
        let mut parts = parts;
        let last = parts.len() - 1;
        parts[last] = parts[last].max(2);
        prop_assume!(parts.iter().sum::<u32>() <= 7);
        let mut letters = Vec::new();
        for &k in &parts {
            letters.push(DifferentialForm::pole(0, 1));
            for _ in 1..k {
                letters.push(DifferentialForm::power(0));
            }
        }
        let w = WordIntegral::new(letters).unwrap();
        let expect = MzvCombination::single(MzvIndex::new(parts).unwrap(), rat_i(1));
        prop_assert_eq!(reduce_word_series(&w).unwrap(), expect.clone());
        prop_assert_eq!(reduce_word_integral(&w).unwrap(), expect);
    }

    /// Shuffle cardinality: an (m, n) shuffle has binom(m+n, m) terms.
    #[test]
    fn shuffle_cardinality(m in 1usize..=4, n in 1usize..=4) {
        let a: Vec<u32> = (0..m as u32).collect();
        let b: Vec<u32> = (100..100 + n as u32).collect();
        let shuffles = shuffle_words(&a, &b);
        let mut binom = 1usize;
        for i in 0..m {
            binom = binom * (n + i + 1) / (i + 1);
        }
        prop_assert_eq!(shuffles.len(), binom);
    }
}

fn arb_index() -> impl Strategy<Value = MzvIndex> {
    prop::collection::vec(1u32..=3, 0..=2).prop_map(|mut parts| {
        if let Some(last) = parts.last_mut() {
            *last = (*last).max(2);
        }
        MzvIndex::new(parts).unwrap()
    })
}

/// Numeric consistency: eval(stuffle(a, b)) = eval(a) * eval(b) to 1e-12 for
/// all admissible pairs of weight <= 5.
#[test]
fn stuffle_numeric_consistency_weight_five() {
    let mut indices: Vec<MzvIndex> = Vec::new();
    for w in 0..=5 {
        indices.extend(zetareduce::mzv::admissible_indices_of_weight(w));
    }
    let mut checked = 0;
    for a in &indices {
        for b in &indices {
            let st = zetareduce::eval_combination(&stuffle(a, b), 13).unwrap();
            let ea = zetareduce::eval_mzv(a, 13).unwrap();
            let eb = zetareduce::eval_mzv(b, 13).unwrap();
            let diff = (st.to_f64() - ea.to_f64() * eb.to_f64()).abs();
            assert!(diff < 1e-12, "stuffle({}, {}) off by {}", a, b, diff);
            checked += 1;
        }
    }
    assert!(checked > 200);
    println!("stuffle numeric consistency: {} pairs at 1e-12", checked);
}

/// Brute-force bracket: the cutoff-1e4 value lies within the cutoff-1e3 tail
/// bound.
#[test]
fn brute_force_bracketing() {
    for (shifts, exps) in [
        (vec![0i64], vec![2u32]),
        (vec![1], vec![3]),
        (vec![0, -1], vec![1, 2]),
        (vec![2, 1], vec![2, 2]),
    ] {
        let s = ShiftedSeries::new(shifts, exps).unwrap();
        let lo = brute_force_shifted(&s, 1_000).unwrap();
        let hi = brute_force_shifted(&s, 10_000).unwrap();
        assert!(
            (hi.to_f64() - lo.to_f64()).abs() <= lo.error,
            "bracketing failed for {:?}",
            s
        );
    }
}

/// Quadrature reproduces exactly known rational integrals.
#[test]
fn quadrature_exact_rationals() {
    // int t^2 (1-t)^1 = B(3, 2) = 1/12
    let b = BrownIntegrand::beta(1, vec![2], vec![1]).unwrap();
    let v = quadrature_brown(&b, 1e-9).unwrap();
    assert!((v.to_f64() - 1.0 / 12.0).abs() < 1e-9);
    // int (t2 - t1)^2 over the simplex = 1/12... direct: 2/4! = 1/12
    let mut c = std::collections::BTreeMap::new();
    c.insert((0usize, 1usize), 2i64);
    let b = BrownIntegrand::new(vec![0, 0], vec![0, 0], c).unwrap();
    let v = quadrature_brown(&b, 1e-9).unwrap();
    let exact = zetareduce::eval_combination(&reduce_brown(&b).unwrap(), 12)
        .unwrap()
        .to_f64();
    assert!((v.to_f64() - exact).abs() < 1e-8);
}

/// The big zeta reduction respects the weight and depth bounds on a small
/// corpus, and convergent terms match the brute-force oracle.
#[test]
fn bigzeta_corpus_bounds_and_oracle() {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    let mut rng = StdRng::seed_from_u64(31337);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 12 && attempts < 4000 {
        attempts += 1;
        let d = rng.gen_range(1..=2usize);
        let w = rng.gen_range(1..=4usize);
        let mut rows = Vec::with_capacity(d);
        for _ in 0..d {
            let a = rng.gen_range(0..w);
            let b = rng.gen_range(a..w);
            let mut row = vec![0u8; w];
            for item in row.iter_mut().take(b + 1).skip(a) {
                *item = 1;
            }
            rows.push(row);
        }
        let m = match QuasiBasicMatrix::new(rows, w) {
            Some(m) => m,
            None => continue,
        };
        if !validate_quasi_basic(&m) {
            continue;
        }
        let shifts: Vec<i64> = (0..w).map(|_| rng.gen_range(-2..=2)).collect();
        let t = match BigZetaTerm::plain(m, shifts, rat_i(1)) {
            Some(t) => t,
            None => continue,
        };
        if !bigzeta_convergent(&t) {
            continue;
        }
        let combo = match reduce_bigzeta(&t) {
            Ok(c) => c,
            Err(zetareduce::error::BigZetaError::NonTerminating(_)) => continue,
            Err(e) => panic!("unexpected error: {}", e),
        };
        assert!(combo.max_weight() as usize <= t.weight());
        assert!(combo.max_depth() as usize <= t.depth());
        let brute = brute_force_bigzeta(&t, 3_000).unwrap();
        let exact = zetareduce::eval_combination(&combo, 13).unwrap();
        let diff = (exact.to_f64() - brute.to_f64()).abs();
        assert!(
            diff <= brute.error + exact.error,
            "oracle mismatch {:e} > {:e} on {:?}",
            diff,
            brute.error,
            t
        );
        checked += 1;
    }
    assert!(checked >= 12, "only {} corpus instances", checked);
}

/// MzvCombination JSON round trip.
#[test]
fn combination_round_trip() {
    let mut c = MzvCombination::zero();
    c.add_term(MzvIndex::new(vec![1, 2]).unwrap(), zetareduce::exact::rat(3, 7));
    c.add_term(MzvIndex::empty(), rat_i(-5));
    let s = serde_json::to_string(&c).unwrap();
    let back: MzvCombination = serde_json::from_str(&s).unwrap();
    assert_eq!(back, c);
}

/// Numeric certification distinguishes equal from unequal combinations that
/// differ as formal sums (Euler's zeta(1,2) = zeta(3)).
#[test]
fn numeric_certification_of_equal_combinations() {
    use zetareduce::numeric::combinations_agree;
    let a = MzvCombination::single(MzvIndex::new(vec![1, 2]).unwrap(), rat_i(1));
    let b = MzvCombination::single(MzvIndex::new(vec![3]).unwrap(), rat_i(1));
    assert_ne!(a, b);
    assert!(combinations_agree(&a, &b, 1e-10));
    let c = MzvCombination::single(MzvIndex::new(vec![2]).unwrap(), rat_i(1));
    assert!(!combinations_agree(&a, &c, 1e-10));
}
