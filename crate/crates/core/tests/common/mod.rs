//! Independent reference computations shared by the integration tests and
//! the acceptance harness. Nothing here calls into the estimator code paths
//! it is used to check.

#![allow(dead_code)]

use goal_reliability::{GoalMode, Observation, PlayerDataset};
use rand::Rng;

/// Literal product-limit evaluation: for every distinct event time `t_j`,
/// `r_j` counts events at `t_j` and `n_j` counts records with duration
/// `>= t_j`. Returns `(t_j, R(t_j))` pairs in increasing time.
pub fn km_literal(durations: &[f64], events: &[bool]) -> Vec<(f64, f64)> {
    let mut times: Vec<f64> = durations
        .iter()
        .zip(events)
        .filter(|(_, &e)| e)
        .map(|(&d, _)| d)
        .collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    times
        .iter()
        .map(|&t| {
            let value: f64 = times
                .iter()
                .filter(|&&tj| tj <= t)
                .map(|&tj| {
                    let r = durations.iter().zip(events).filter(|(&d, &e)| e && d == tj).count() as f64;
                    let n = durations.iter().filter(|&&d| d >= tj).count() as f64;
                    1.0 - r / n
                })
                .product();
            (t, value)
        })
        .collect()
}

/// Literal step-function evaluation of [`km_literal`] output.
pub fn km_literal_at(durations: &[f64], events: &[bool], t: f64) -> f64 {
    km_literal(durations, events)
        .iter()
        .rev()
        .find(|(tj, _)| *tj <= t)
        .map_or(1.0, |&(_, r)| r)
}

/// Confidence band written out directly from the closed form, with the
/// 95% quantile hard-coded.
pub const Z95: f64 = 1.959_963_984_540_054;

pub fn ci_direct(r: f64, var: f64, z: f64) -> (f64, f64) {
    let e = (z * var.sqrt() / (r * (1.0 - r))).exp();
    let lower = r / (r + (1.0 - r) * e);
    let upper = r / (r + (1.0 - r) / e);
    (lower, upper)
}

/// Upper tail of chi-square(1) by quadrature of the density. With
/// `x = u²` the tail is `2 ∫_{√x}^{∞} φ(u) du`; integrated by composite
/// Simpson on `[√x, √x + 40]`.
pub fn chi2_1df_tail_quadrature(x: f64) -> f64 {
    let a = x.sqrt();
    let b = a + 40.0;
    let n = 200_000;
    let h = (b - a) / n as f64;
    let phi = |u: f64| (-0.5 * u * u).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut s = phi(a) + phi(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * phi(a + i as f64 * h);
    }
    2.0 * s * h / 3.0
}

/// Log-rank chi-square computed from scratch with per-time 2x2 tables.
pub fn logrank_literal(dur: &[f64], ev: &[bool], in_a: &[bool]) -> f64 {
    let mut times: Vec<f64> = dur.iter().zip(ev).filter(|(_, &e)| e).map(|(&d, _)| d).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let (mut o, mut e, mut v) = (0.0, 0.0, 0.0);
    for &t in &times {
        let n = dur.iter().filter(|&&d| d >= t).count() as f64;
        let na = dur.iter().zip(in_a).filter(|(&d, &a)| a && d >= t).count() as f64;
        let d = dur.iter().zip(ev).filter(|(&x, &y)| y && x == t).count() as f64;
        let da = (0..dur.len()).filter(|&i| ev[i] && in_a[i] && dur[i] == t).count() as f64;
        o += da;
        e += d * na / n;
        if n > 1.0 {
            v += d * (na / n) * (1.0 - na / n) * (n - d) / (n - 1.0);
        }
    }
    if v == 0.0 {
        0.0
    } else {
        (o - e) * (o - e) / v
    }
}

/// Random dataset with integer minutes and no two goals of different modes
/// at the same minute. Goal minutes are drawn without replacement.
pub fn random_tie_free<R: Rng>(rng: &mut R, max_records: usize, modes: &[GoalMode]) -> PlayerDataset {
    let n = rng.random_range(1..=max_records);
    let mut free_minutes: Vec<u32> = (1..=120).collect();
    let mut used: Vec<(u32, GoalMode)> = Vec::new();
    let mut obs = Vec::with_capacity(n);
    for i in 0..n {
        let id = format!("M{i}");
        if rng.random_bool(0.6) {
            // same-mode ties are fine; reuse an earlier goal's minute and mode
            let (minute, mode) = if !used.is_empty() && rng.random_bool(0.2) {
                used[rng.random_range(0..used.len())]
            } else {
                let k = rng.random_range(0..free_minutes.len());
                (free_minutes.swap_remove(k), modes[rng.random_range(0..modes.len())])
            };
            used.push((minute, mode));
            obs.push(Observation::goal(&id, "s", f64::from(minute), mode));
        } else {
            let minute = rng.random_range(1..=120);
            obs.push(Observation::no_goal(&id, "s", f64::from(minute)));
        }
    }
    PlayerDataset::from_observations("rand", obs)
}

/// Arbitrary dataset, ties allowed everywhere.
pub fn random_dataset<R: Rng>(rng: &mut R, max_records: usize, max_minute: u32) -> PlayerDataset {
    let n = rng.random_range(1..=max_records);
    let obs = (0..n)
        .map(|i| {
            let id = format!("M{i}");
            let minute = f64::from(rng.random_range(1..=max_minute));
            if rng.random_bool(0.5) {
                let mode = GoalMode::ALL[rng.random_range(0..6)];
                Observation::goal(&id, "s", minute, mode)
            } else {
                Observation::no_goal(&id, "s", minute)
            }
        })
        .collect();
    PlayerDataset::from_observations("rand", obs)
}
