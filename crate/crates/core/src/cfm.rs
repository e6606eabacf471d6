//! Competing failure modes: one reliability curve per way of scoring, with
//! goals of every other mode censored at their own time, combined by
//! multiplying the per-mode step functions.
//!
//! The combined band treats the modes as independent on the log scale:
//! `Var(ln R) = Σ Var(R_i) / R_i²`, so `Var(R) = R² · Σ Var(R_i) / R_i²`,
//! and the same transform as the single-mode band is applied to `R`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::km::{ci_bounds_with_z, fit_km, z_for_confidence, KmInput, DEFAULT_CONFIDENCE};
use crate::model::{GoalMode, PlayerDataset, ReliabilityCurve};

/// Default minimum number of goals a mode needs to enter the combination.
pub const DEFAULT_MIN_EVENTS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CfmConfig {
    /// Explicit selection; overrides the event threshold when set.
    pub included_modes: Option<BTreeSet<GoalMode>>,
    pub min_events_per_mode: usize,
    pub confidence: f64,
}

impl Default for CfmConfig {
    fn default() -> Self {
        Self {
            included_modes: None,
            min_events_per_mode: DEFAULT_MIN_EVENTS,
            confidence: DEFAULT_CONFIDENCE,
        }
    }
}

impl CfmConfig {
    pub fn with_modes(modes: impl IntoIterator<Item = GoalMode>) -> Self {
        Self {
            included_modes: Some(modes.into_iter().collect()),
            ..Self::default()
        }
    }
}

/// Combined curve. `combined` stores the product estimate at every event
/// time of any included mode; its `n_risk` is the shared risk set and
/// `n_event` the number of included-mode goals at that time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CfmCurve {
    pub combined: ReliabilityCurve,
    pub per_mode: BTreeMap<GoalMode, ReliabilityCurve>,
}

impl CfmCurve {
    pub fn times(&self) -> &[f64] {
        &self.combined.times
    }

    pub fn estimates(&self) -> &[f64] {
        &self.combined.estimates
    }

    pub fn estimate_at(&self, t: f64) -> f64 {
        self.combined.estimate_at(t)
    }

    pub fn modes(&self) -> impl Iterator<Item = GoalMode> + '_ {
        self.per_mode.keys().copied()
    }
}

/// Event flags for one mode: a record is an event only when it is a goal of
/// that mode. Every other record is censored at its own duration.
pub fn restrict_to_mode(ds: &PlayerDataset, mode: GoalMode) -> KmInput {
    let (durations, events) = ds
        .observations
        .iter()
        .map(|o| (o.analysis_minute(), !o.censored && o.mode == Some(mode)))
        .unzip();
    KmInput::new(durations, events).expect("validated dataset has positive durations")
}

/// Event flags for any goal, regardless of mode.
pub fn any_goal_input(ds: &PlayerDataset) -> KmInput {
    let (durations, events) = ds
        .observations
        .iter()
        .map(|o| (o.analysis_minute(), o.is_goal()))
        .unzip();
    KmInput::new(durations, events).expect("validated dataset has positive durations")
}

pub fn select_modes(ds: &PlayerDataset, cfg: &CfmConfig) -> Result<BTreeSet<GoalMode>> {
    let selected: BTreeSet<GoalMode> = match &cfg.included_modes {
        Some(explicit) => explicit.clone(),
        None => GoalMode::ALL
            .into_iter()
            .filter(|&m| ds.goals_in_mode(m) >= cfg.min_events_per_mode)
            .collect(),
    };
    if selected.is_empty() {
        return Err(Error::EmptySelection);
    }
    Ok(selected)
}

/// Multiplies already-fitted per-mode curves.
pub fn combine_curves(per_mode: BTreeMap<GoalMode, ReliabilityCurve>, confidence: f64) -> Result<CfmCurve> {
    let Some(first) = per_mode.values().next() else {
        return Err(Error::EmptySelection);
    };
    let z = z_for_confidence(confidence)?;
    let mut combined = ReliabilityCurve::empty(first.n_total, confidence);

    // (time, risk set, events), merged over modes
    let mut steps: BTreeMap<u64, (f64, usize, usize)> = BTreeMap::new();
    for curve in per_mode.values() {
        for k in 0..curve.len() {
            let t = curve.times[k];
            let slot = steps.entry(t.to_bits()).or_insert((t, curve.n_risk[k], 0));
            slot.1 = slot.1.max(curve.n_risk[k]);
            slot.2 += curve.n_event[k];
        }
    }

    for (t, n_risk, n_event) in steps.into_values() {
        let mut estimate = 1.0;
        let mut log_var = 0.0;
        let mut degenerate = false;
        for curve in per_mode.values() {
            let r = curve.estimate_at(t);
            estimate *= r;
            if r == 0.0 {
                degenerate = true;
            } else {
                log_var += curve.variance_at(t) / (r * r);
            }
        }
        let variance = if degenerate { 0.0 } else { estimate * estimate * log_var };
        let (lo, hi) = ci_bounds_with_z(estimate, variance, z)?;
        combined.times.push(t);
        combined.estimates.push(estimate);
        combined.variances.push(variance);
        combined.ci_lower.push(lo);
        combined.ci_upper.push(hi);
        combined.n_risk.push(n_risk);
        combined.n_event.push(n_event);
    }
    Ok(CfmCurve { combined, per_mode })
}

pub fn fit_cfm(ds: &PlayerDataset, cfg: &CfmConfig) -> Result<CfmCurve> {
    let modes = select_modes(ds, cfg)?;
    let per_mode = modes
        .into_iter()
        .map(|m| Ok((m, fit_km(&restrict_to_mode(ds, m), cfg.confidence)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    combine_curves(per_mode, cfg.confidence)
}
