use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeMap;
use zetareduce::*;

#[test]
fn selberg_n2_log_moments_vs_quadrature() {
    // int int_{t1<t2} log t2 * t1 dt: base_a = (1, 0), log_a = (0, 1)
    for (base_a, base_b, log_a, log_b) in [
        (vec![1i64, 0], vec![0i64, 0], vec![0u32, 1], vec![0u32, 0]),
        (vec![0, 0], vec![0, 0], vec![1, 0], vec![0, 0]),
        (vec![0, 0], vec![0, 1], vec![0, 0], vec![1, 0]),
        (vec![0, 0], vec![0, 0], vec![1, 0], vec![0, 1]),
    ] {
        let spec = SelbergSpec::pure(
            2, base_a.clone(), base_b.clone(), BTreeMap::new(),
            log_a.clone(), log_b.clone(), BTreeMap::new(),
        ).unwrap();
        let combo = selberg_taylor_coefficient(&spec).unwrap();
        let exact = zetareduce::eval_combination(&combo, 13).unwrap().to_f64();
        let b = BrownIntegrand::new(base_a.clone(), base_b.clone(), BTreeMap::new()).unwrap();
        let logs = zetareduce::numeric::quad::LogPowers {
            a: log_a.clone(), b: log_b.clone(), c: BTreeMap::new(),
        };
        let q = quadrature_log_brown(&b, &logs, 1e-8).unwrap().to_f64();
        assert!(
            (exact - q).abs() < 1e-6,
            "a={:?} b={:?} la={:?} lb={:?}: exact {} quad {}",
            base_a, base_b, log_a, log_b, exact, q
        );
    }
    println!("selberg N=2 log moments vs quadrature: PASS");
}

#[test]
fn selberg_log_difference_moment() {
    // int int_{t1<t2} log(t2-t1) dt = -3/4 checked against quadrature
    let mut log_c = BTreeMap::new();
    log_c.insert((0usize, 1usize), 1u32);
    let spec = SelbergSpec::pure(
        2, vec![0, 0], vec![0, 0], BTreeMap::new(), vec![0, 0], vec![0, 0], log_c.clone(),
    ).unwrap();
    let combo = selberg_taylor_coefficient(&spec).unwrap();
    assert_eq!(combo, MzvCombination::constant(zetareduce::exact::rat(-3, 4)));
    let b = BrownIntegrand::new(vec![0, 0], vec![0, 0], BTreeMap::new()).unwrap();
    let logs = zetareduce::numeric::quad::LogPowers { a: vec![0, 0], b: vec![0, 0], c: log_c };
    let q = quadrature_log_brown(&b, &logs, 1e-8).unwrap().to_f64();
    assert!((q + 0.75).abs() < 1e-7, "quad {}", q);
    println!("selberg log-difference moment: PASS (-3/4)");
}

#[test]
fn wide_brown_sweep() {
    let mut rng = StdRng::seed_from_u64(777);
    let (mut ok, mut unreduced, mut tried) = (0, 0, 0);
    while tried < 120 {
        let n = rng.gen_range(1..=3usize);
        let a: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        let b: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        let mut c = BTreeMap::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let e = rng.gen_range(-2..=2);
                if e != 0 { c.insert((i, j), e); }
            }
        }
        let bi = BrownIntegrand::new(a, b, c).unwrap();
        if !brown_convergent(&bi) { continue; }
        tried += 1;
        match reduce_brown(&bi) {
            Ok(combo) => {
                ok += 1;
                assert!(combo.max_weight() as usize <= n, "weight bound on {:?}", bi);
                // quadrature cross-check on a sample
                if tried % 4 == 0 {
                    let exact = zetareduce::eval_combination(&combo, 13).unwrap().to_f64();
                    let q = quadrature_brown(&bi, 1e-6).unwrap().to_f64();
                    let rel = (exact - q).abs() / q.abs().max(1e-12);
                    assert!(rel < 1e-4, "rel {} on {:?}", rel, bi);
                }
            }
            Err(zetareduce::error::BrownError::BigZeta(e))
                if matches!(*e, zetareduce::error::BigZetaError::NonTerminating(_)) =>
            {
                unreduced += 1;
            }
            Err(e) => panic!("unexpected error on {:?}: {}", bi, e),
        }
    }
    println!("wide sweep: {} tried, {} ok, {} unreduced", tried, ok, unreduced);
    assert!(unreduced * 10 <= tried, "too many unreduced: {}/{}", unreduced, tried);
}
