//! Two-curve comparisons: the log-rank test and confidence-band overlap.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::km::KmInput;
use crate::model::ReliabilityCurve;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRankResult {
    pub chi_square: f64,
    pub degrees_freedom: u32,
    pub p_value: f64,
    /// Events observed in the first group.
    pub observed_a: f64,
    /// Events expected in the first group under equal hazards.
    pub expected_a: f64,
    /// Hypergeometric variance of `observed_a - expected_a`.
    pub variance: f64,
}

/// Upper tail `P(X > x)` of the chi-square distribution with one degree of
/// freedom, i.e. `2 (1 - Φ(√x)) = erfc(√(x/2))`.
pub fn chi_square_1df_pvalue(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::NegativeStatistic(x));
    }
    Ok(erfc((x / 2.0).sqrt()).clamp(0.0, 1.0))
}

struct Pooled {
    time: f64,
    events_a: usize,
    events_b: usize,
    leaving_a: usize,
    leaving_b: usize,
}

fn pool(a: &KmInput, b: &KmInput) -> Vec<Pooled> {
    let mut rows: Vec<(f64, bool, bool)> = a
        .durations()
        .iter()
        .zip(a.events())
        .map(|(&t, &e)| (t, e, true))
        .chain(b.durations().iter().zip(b.events()).map(|(&t, &e)| (t, e, false)))
        .collect();
    rows.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut out: Vec<Pooled> = Vec::new();
    for (t, event, in_a) in rows {
        if out.last().is_none_or(|p| p.time != t) {
            out.push(Pooled {
                time: t,
                events_a: 0,
                events_b: 0,
                leaving_a: 0,
                leaving_b: 0,
            });
        }
        let p = out.last_mut().unwrap();
        match (in_a, event) {
            (true, true) => p.events_a += 1,
            (false, true) => p.events_b += 1,
            _ => {}
        }
        if in_a {
            p.leaving_a += 1;
        } else {
            p.leaving_b += 1;
        }
    }
    out
}

/// Two-sample log-rank test. The first group's observed-minus-expected
/// count is standardised by the hypergeometric variance and referred to
/// chi-square with one degree of freedom.
pub fn log_rank(a: &KmInput, b: &KmInput) -> Result<LogRankResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput);
    }
    if a.event_count() + b.event_count() == 0 {
        return Err(Error::NoEvents);
    }

    let (mut at_risk_a, mut at_risk_b) = (a.len(), b.len());
    let (mut observed, mut expected, mut variance) = (0.0, 0.0, 0.0);
    for step in pool(a, b) {
        let d = step.events_a + step.events_b;
        if d > 0 {
            let n = (at_risk_a + at_risk_b) as f64;
            let share = at_risk_a as f64 / n;
            let d = d as f64;
            observed += step.events_a as f64;
            expected += d * share;
            if n > 1.0 {
                variance += d * share * (1.0 - share) * (n - d) / (n - 1.0);
            }
        }
        at_risk_a -= step.leaving_a;
        at_risk_b -= step.leaving_b;
    }

    let diff = observed - expected;
    let chi_square = if variance > 0.0 {
        diff * diff / variance
    } else {
        assert!(
            diff.abs() < 1e-9,
            "log-rank variance vanished with observed {observed} != expected {expected}"
        );
        0.0
    };
    Ok(LogRankResult {
        chi_square,
        degrees_freedom: 1,
        p_value: chi_square_1df_pvalue(chi_square)?,
        observed_a: observed,
        expected_a: expected,
        variance,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NotSignificantlyDifferent,
    Different,
}

/// How two confidence intervals are judged to overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverlapRule {
    /// Any shared point counts as overlap.
    #[default]
    Any,
    /// The shared stretch must be at least half the average margin of error
    /// of the two intervals.
    HalfMargin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapVerdict {
    pub grid: Vec<f64>,
    pub overlap_flags: Vec<bool>,
    pub fraction_overlapping: f64,
    pub verdict: Verdict,
}

/// Integer minutes `1..=120`.
pub fn default_grid() -> Vec<f64> {
    (1..=120).map(f64::from).collect()
}

fn intervals_overlap(a: (f64, f64, f64), b: (f64, f64, f64), rule: OverlapRule) -> bool {
    let (lo_a, est_a, hi_a) = a;
    let (lo_b, est_b, hi_b) = b;
    let shared = hi_a.min(hi_b) - lo_a.max(lo_b);
    match rule {
        OverlapRule::Any => shared >= 0.0,
        OverlapRule::HalfMargin => {
            // margins measured on the side facing the other interval
            let (margin_a, margin_b) = if est_a <= est_b {
                (hi_a - est_a, est_b - lo_b)
            } else {
                (est_a - lo_a, hi_b - est_b)
            };
            shared >= 0.25 * (margin_a + margin_b)
        }
    }
}

/// Compares two curves' confidence bands at every grid time using the
/// plain any-overlap rule.
pub fn ci_overlap(a: &ReliabilityCurve, b: &ReliabilityCurve, grid: &[f64]) -> Result<OverlapVerdict> {
    ci_overlap_with(a, b, grid, OverlapRule::Any)
}

pub fn ci_overlap_with(
    a: &ReliabilityCurve,
    b: &ReliabilityCurve,
    grid: &[f64],
    rule: OverlapRule,
) -> Result<OverlapVerdict> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if let Some(&t) = grid.iter().find(|t| t.is_nan() || **t < 0.0) {
        return Err(Error::InvalidTime(t));
    }
    let overlap_flags: Vec<bool> = grid
        .iter()
        .map(|&t| {
            let pa = a.evaluate(t);
            let pb = b.evaluate(t);
            intervals_overlap(
                (pa.ci_lower, pa.estimate, pa.ci_upper),
                (pb.ci_lower, pb.estimate, pb.ci_upper),
                rule,
            )
        })
        .collect();
    let hits = overlap_flags.iter().filter(|&&f| f).count();
    let verdict = if hits == overlap_flags.len() {
        Verdict::NotSignificantlyDifferent
    } else {
        Verdict::Different
    };
    Ok(OverlapVerdict {
        grid: grid.to_vec(),
        fraction_overlapping: hits as f64 / overlap_flags.len() as f64,
        overlap_flags,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::km::fit_km;

    fn input(d: &[f64], e: &[bool]) -> KmInput {
        KmInput::new(d.to_vec(), e.to_vec()).unwrap()
    }

    #[test]
    fn worked_example() {
        let a = input(&[3.0, 5.0], &[true, false]);
        let b = input(&[3.0, 4.0], &[true, true]);
        let r = log_rank(&a, &b).unwrap();
        assert!((r.observed_a - 1.0).abs() < 1e-15);
        assert!((r.expected_a - 1.5).abs() < 1e-15);
        assert!((r.variance - 7.0 / 12.0).abs() < 1e-15);
        assert!((r.chi_square - 3.0 / 7.0).abs() < 1e-12);
        assert!((r.p_value - 0.5127).abs() < 1e-4);
        assert_eq!(r.degrees_freedom, 1);
    }

    #[test]
    fn identical_groups() {
        let a = input(&[3.0, 5.0, 9.0, 9.0], &[true, false, true, true]);
        let r = log_rank(&a, &a.clone()).unwrap();
        assert!(r.chi_square.abs() < 1e-15);
        assert!((r.p_value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn symmetric_in_arguments() {
        let a = input(&[1.0, 4.0, 6.0, 7.0], &[true, true, false, true]);
        let b = input(&[2.0, 3.0, 8.0], &[true, false, true]);
        let ab = log_rank(&a, &b).unwrap();
        let ba = log_rank(&b, &a).unwrap();
        assert!((ab.chi_square - ba.chi_square).abs() < 1e-12);
        assert!((ab.p_value - ba.p_value).abs() < 1e-12);
    }

    #[test]
    fn no_events_is_an_error() {
        let a = input(&[3.0], &[false]);
        let b = input(&[4.0], &[false]);
        assert!(matches!(log_rank(&a, &b), Err(Error::NoEvents)));
    }

    #[test]
    fn one_sided_risk_sets_give_zero_statistic() {
        // b has left before any event, so every event is expected in a
        let a = input(&[5.0, 6.0], &[true, true]);
        let b = input(&[1.0], &[false]);
        let r = log_rank(&a, &b).unwrap();
        assert_eq!(r.chi_square, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn pvalue_reference_points() {
        assert_eq!(chi_square_1df_pvalue(0.0).unwrap(), 1.0);
        assert!((chi_square_1df_pvalue(3.841_459).unwrap() - 0.05).abs() < 1e-7);
        assert!(chi_square_1df_pvalue(-1.0).is_err());
        assert!(chi_square_1df_pvalue(1e4).unwrap() < 1e-300);
    }

    #[test]
    fn overlap_reflexive() {
        let c = fit_km(&input(&[2.0, 4.0, 4.0, 9.0], &[true, true, false, true]), 0.95).unwrap();
        let v = ci_overlap(&c, &c, &default_grid()).unwrap();
        assert_eq!(v.verdict, Verdict::NotSignificantlyDifferent);
        assert_eq!(v.fraction_overlapping, 1.0);
        let v = ci_overlap_with(&c, &c, &default_grid(), OverlapRule::HalfMargin).unwrap();
        assert_eq!(v.verdict, Verdict::NotSignificantlyDifferent);
    }

    fn flat(estimate: f64) -> ReliabilityCurve {
        let mut c = ReliabilityCurve::empty(10, 0.95);
        c.times = vec![5.0];
        c.estimates = vec![estimate];
        c.variances = vec![0.0];
        c.ci_lower = vec![estimate];
        c.ci_upper = vec![estimate];
        c.n_risk = vec![10];
        c.n_event = vec![1];
        c
    }

    #[test]
    fn disjoint_degenerate_intervals() {
        let v = ci_overlap(&flat(0.9), &flat(0.1), &[1.0, 5.0, 10.0]).unwrap();
        assert_eq!(v.overlap_flags, vec![true, false, false]);
        assert!((v.fraction_overlapping - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(v.verdict, Verdict::Different);
    }

    #[test]
    fn half_margin_is_stricter() {
        // intervals [0.3, 0.5] around 0.4 and [0.48, 0.68] around 0.58
        let a = (0.3, 0.4, 0.5);
        let b = (0.48, 0.58, 0.68);
        assert!(intervals_overlap(a, b, OverlapRule::Any));
        assert!(!intervals_overlap(a, b, OverlapRule::HalfMargin));
        let c = (0.42, 0.52, 0.62);
        assert!(intervals_overlap(a, c, OverlapRule::HalfMargin));
    }

    #[test]
    fn grid_errors() {
        let c = flat(0.5);
        assert!(matches!(ci_overlap(&c, &c, &[]), Err(Error::EmptyGrid)));
        assert!(matches!(ci_overlap(&c, &c, &[-1.0]), Err(Error::InvalidTime(_))));
    }
}
