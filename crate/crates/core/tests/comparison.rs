mod common;

use goal_reliability::compare::{ci_overlap, ci_overlap_with, default_grid, OverlapRule};
use goal_reliability::{chi_square_1df_pvalue, fit_km, log_rank, KmInput, Verdict};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn group() -> impl Strategy<Value = KmInput> {
    prop::collection::vec((1u32..=20, any::<bool>()), 1..25).prop_map(|v| {
        let (d, e): (Vec<f64>, Vec<bool>) = v.into_iter().map(|(d, e)| (f64::from(d), e)).unzip();
        KmInput::new(d, e).unwrap()
    })
}

#[test]
fn pvalue_matches_quadrature() {
    for x in [0.0, 0.01, 0.4286, 1.0, 2.5, 3.841_459, 6.635, 10.0, 20.0] {
        let p = chi_square_1df_pvalue(x).unwrap();
        let q = common::chi2_1df_tail_quadrature(x);
        assert!((p - q).abs() < 1e-10, "x={x}: {p} vs {q}");
    }
    assert!((common::chi2_1df_tail_quadrature(3.841_459) - 0.05).abs() < 1e-7);
}

#[test]
fn pvalue_strictly_decreasing() {
    let mut prev = chi_square_1df_pvalue(0.0).unwrap();
    assert_eq!(prev, 1.0);
    for i in 1..=400 {
        let p = chi_square_1df_pvalue(i as f64 * 0.1).unwrap();
        assert!(p < prev);
        prev = p;
    }
}

/// With moderately large groups the asymptotic p-value should sit close to
/// a label-permutation estimate.
#[test]
fn permutation_agrees_on_larger_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 200;
    let dur: Vec<f64> = (0..n).map(|_| f64::from(rng.random_range(1..=60))).collect();
    let ev: Vec<bool> = (0..n).map(|_| rng.random_bool(0.7)).collect();
    let mut labels: Vec<bool> = (0..n).map(|i| i % 2 == 0).collect();
    let split = |labels: &[bool]| {
        let pick = |want: bool| {
            let (d, e): (Vec<f64>, Vec<bool>) = (0..n).filter(|&i| labels[i] == want).map(|i| (dur[i], ev[i])).unzip();
            KmInput::new(d, e).unwrap()
        };
        (pick(true), pick(false))
    };
    let (a, b) = split(&labels);
    let observed = log_rank(&a, &b).unwrap();
    let shuffles = 2000;
    let mut hits = 0;
    for _ in 0..shuffles {
        labels.shuffle(&mut rng);
        let (a, b) = split(&labels);
        if log_rank(&a, &b).unwrap().chi_square >= observed.chi_square - 1e-12 {
            hits += 1;
        }
    }
    let p_perm = hits as f64 / shuffles as f64;
    assert!(
        (p_perm - observed.p_value).abs() < 0.05,
        "{p_perm} vs {}",
        observed.p_value
    );
}

proptest! {
    #[test]
    fn log_rank_symmetric(a in group(), b in group()) {
        prop_assume!(a.event_count() + b.event_count() > 0);
        let ab = log_rank(&a, &b).unwrap();
        let ba = log_rank(&b, &a).unwrap();
        prop_assert!((ab.chi_square - ba.chi_square).abs() < 1e-9);
        prop_assert!((ab.p_value - ba.p_value).abs() < 1e-9);
        prop_assert!(ab.chi_square >= 0.0);
        prop_assert!((0.0..=1.0).contains(&ab.p_value));
    }

    #[test]
    fn log_rank_matches_literal_tables(a in group(), b in group()) {
        prop_assume!(a.event_count() + b.event_count() > 0);
        let r = log_rank(&a, &b).unwrap();
        let dur: Vec<f64> = a.durations().iter().chain(b.durations()).copied().collect();
        let ev: Vec<bool> = a.events().iter().chain(b.events()).copied().collect();
        let in_a: Vec<bool> = (0..dur.len()).map(|i| i < a.len()).collect();
        let lit = common::logrank_literal(&dur, &ev, &in_a);
        prop_assert!((r.chi_square - lit).abs() < 1e-9 * (1.0 + lit));
    }

    #[test]
    fn log_rank_self_comparison(a in group()) {
        prop_assume!(a.event_count() > 0);
        let r = log_rank(&a, &a).unwrap();
        prop_assert!(r.chi_square < 1e-20);
    }

    #[test]
    fn overlap_reflexive_and_symmetric(a in group(), b in group()) {
        let ca = fit_km(&a, 0.95).unwrap();
        let cb = fit_km(&b, 0.95).unwrap();
        let grid = default_grid();
        prop_assert_eq!(ci_overlap(&ca, &ca, &grid).unwrap().verdict, Verdict::NotSignificantlyDifferent);
        let ab = ci_overlap(&ca, &cb, &grid).unwrap();
        let ba = ci_overlap(&cb, &ca, &grid).unwrap();
        prop_assert_eq!(&ab, &ba);
        let mean = ab.overlap_flags.iter().filter(|&&f| f).count() as f64 / grid.len() as f64;
        prop_assert_eq!(ab.fraction_overlapping, mean);
        let strict = ci_overlap_with(&ca, &cb, &grid, OverlapRule::HalfMargin).unwrap();
        for (s, p) in strict.overlap_flags.iter().zip(&ab.overlap_flags) {
            prop_assert!(!s || *p);
        }
    }
}
