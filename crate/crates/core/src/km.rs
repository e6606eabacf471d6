//! Product-limit (Kaplan-Meier) reliability estimation.
//!
//! Ties: at a shared time, events are scored against the full risk set and
//! censored records at that time leave afterwards. Variances use Greenwood's
//! sum; confidence bands use the logit-type transform
//!
//! ```text
//! lower = R / (R + (1 - R) * w),  upper = R / (R + (1 - R) / w),
//! w = exp(z * sqrt(Var) / (R * (1 - R)))
//! ```
//!
//! which collapses to `(R, R)` when `R` is 0 or 1.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::model::ReliabilityCurve;

pub const DEFAULT_CONFIDENCE: f64 = 0.95;

/// The rounded two-sided 95% normal quantile. Passing it to
/// [`ci_bounds_with_z`] reproduces bands computed with the textbook `1.96`.
pub const Z_95_ROUNDED: f64 = 1.96;

/// Durations with matching event flags (`true` = event observed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KmInput {
    durations: Vec<f64>,
    events: Vec<bool>,
}

impl KmInput {
    pub fn new(durations: Vec<f64>, events: Vec<bool>) -> Result<Self> {
        if durations.len() != events.len() {
            return Err(Error::LengthMismatch {
                durations: durations.len(),
                flags: events.len(),
            });
        }
        if let Some((index, &value)) = durations
            .iter()
            .enumerate()
            .find(|(_, d)| !(d.is_finite() && **d > 0.0))
        {
            return Err(Error::InvalidDuration { index, value });
        }
        Ok(Self { durations, events })
    }

    pub fn durations(&self) -> &[f64] {
        &self.durations
    }

    pub fn events(&self) -> &[bool] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.durations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.durations.is_empty()
    }

    pub fn event_count(&self) -> usize {
        self.events.iter().filter(|&&e| e).count()
    }

    /// Records sorted by duration, grouped into `(time, events, censored)`.
    pub(crate) fn grouped(&self) -> Vec<(f64, usize, usize)> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.durations[a].total_cmp(&self.durations[b]));
        let mut out: Vec<(f64, usize, usize)> = Vec::new();
        for i in order {
            let t = self.durations[i];
            let slot = match out.last_mut() {
                Some(last) if last.0 == t => last,
                _ => {
                    out.push((t, 0, 0));
                    out.last_mut().unwrap()
                }
            };
            if self.events[i] {
                slot.1 += 1;
            } else {
                slot.2 += 1;
            }
        }
        out
    }
}

/// Two-sided standard-normal quantile for a confidence level.
pub fn z_for_confidence(confidence: f64) -> Result<f64> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidConfidence(confidence));
    }
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    Ok(normal.inverse_cdf((1.0 + confidence) / 2.0))
}

/// Running Greenwood accumulator over event times.
#[derive(Debug, Clone, Copy, Default)]
pub struct GreenwoodSum {
    sum: f64,
    exhausted: bool,
}

impl GreenwoodSum {
    /// Adds the term for `events` out of `at_risk`.
    pub fn add(&mut self, events: usize, at_risk: usize) {
        if events >= at_risk {
            self.exhausted = true;
        } else {
            let (d, n) = (events as f64, at_risk as f64);
            self.sum += d / (n * (n - d));
        }
    }

    pub fn sum(&self) -> f64 {
        self.sum
    }

    /// `R² · Σ r_j / (n_j (n_j − r_j))`; zero once the risk set has been
    /// exhausted, since the estimate is then exactly zero.
    pub fn variance(&self, estimate: f64) -> f64 {
        if self.exhausted {
            0.0
        } else {
            estimate * estimate * self.sum
        }
    }
}

/// Greenwood variance from explicit `(events, at_risk)` pairs at every event
/// time up to and including the one of interest.
pub fn greenwood_variance(estimate: f64, terms: &[(usize, usize)]) -> f64 {
    let mut acc = GreenwoodSum::default();
    for &(d, n) in terms {
        acc.add(d, n);
    }
    acc.variance(estimate)
}

/// Confidence band for one estimate at the given confidence level.
pub fn ci_bounds(estimate: f64, variance: f64, confidence: f64) -> Result<(f64, f64)> {
    ci_bounds_with_z(estimate, variance, z_for_confidence(confidence)?)
}

/// Confidence band with an explicit normal quantile.
pub fn ci_bounds_with_z(estimate: f64, variance: f64, z: f64) -> Result<(f64, f64)> {
    if variance.is_nan() || variance < 0.0 {
        return Err(Error::InvalidVariance(variance));
    }
    if !(0.0..=1.0).contains(&estimate) {
        return Err(Error::InvalidEstimate(estimate));
    }
    if estimate == 0.0 || estimate == 1.0 || variance == 0.0 {
        return Ok((estimate, estimate));
    }
    let r = estimate;
    let w = (z * variance.sqrt() / (r * (1.0 - r))).exp();
    let lower = r / (r + (1.0 - r) * w);
    let upper = r / (r + (1.0 - r) / w);
    Ok((lower.clamp(0.0, r), upper.clamp(r, 1.0)))
}

/// Fits the product-limit curve with Greenwood variances and confidence
/// bands at `confidence`.
pub fn fit_km(input: &KmInput, confidence: f64) -> Result<ReliabilityCurve> {
    if input.is_empty() {
        return Err(Error::EmptyInput);
    }
    let z = z_for_confidence(confidence)?;
    let mut curve = ReliabilityCurve::empty(input.len(), confidence);
    let mut at_risk = input.len();
    let mut estimate = 1.0;
    let mut greenwood = GreenwoodSum::default();

    for (time, events, censored) in input.grouped() {
        if events > 0 {
            estimate *= 1.0 - events as f64 / at_risk as f64;
            greenwood.add(events, at_risk);
            let variance = greenwood.variance(estimate);
            let (lo, hi) = ci_bounds_with_z(estimate, variance, z)?;
            curve.times.push(time);
            curve.estimates.push(estimate);
            curve.variances.push(variance);
            curve.ci_lower.push(lo);
            curve.ci_upper.push(hi);
            curve.n_risk.push(at_risk);
            curve.n_event.push(events);
        }
        at_risk -= events + censored;
    }
    Ok(curve)
}
