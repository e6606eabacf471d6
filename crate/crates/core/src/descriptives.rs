use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{GoalMode, PlayerDataset};

/// Data characteristics and goal distribution of one player. Percentages
/// are kept at full precision; rounding happens when reports are written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryTable {
    pub player_name: String,
    pub games_played: usize,
    pub censored_count: usize,
    pub uncensored_count: usize,
    pub total_records: usize,
    pub games_with_goal: usize,
    pub goals_per_match: f64,
    pub mode_counts: BTreeMap<GoalMode, usize>,
    /// Share of goals per mode, in percent of `uncensored_count`.
    pub mode_percentages: BTreeMap<GoalMode, f64>,
    /// Shares of `total_records`, in percent.
    pub censored_percentage: f64,
    pub uncensored_percentage: f64,
    /// Share of `games_played`, in percent.
    pub games_with_goal_percentage: f64,
}

fn percent(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        100.0 * part as f64 / whole as f64
    }
}

pub fn summarize(ds: &PlayerDataset) -> Result<SummaryTable> {
    if ds.games_played == 0 {
        return Err(Error::NoGames);
    }
    let censored_count = ds.censored_count();
    let uncensored_count = ds.uncensored_count();
    let total_records = ds.observations.len();
    let mode_counts: BTreeMap<GoalMode, usize> = GoalMode::ALL.into_iter().map(|m| (m, ds.goals_in_mode(m))).collect();
    let mode_percentages = mode_counts
        .iter()
        .map(|(&m, &c)| (m, percent(c, uncensored_count)))
        .collect();
    Ok(SummaryTable {
        player_name: ds.player_name.clone(),
        games_played: ds.games_played,
        censored_count,
        uncensored_count,
        total_records,
        games_with_goal: ds.games_with_goal,
        goals_per_match: uncensored_count as f64 / ds.games_played as f64,
        mode_counts,
        mode_percentages,
        censored_percentage: percent(censored_count, total_records),
        uncensored_percentage: percent(uncensored_count, total_records),
        games_with_goal_percentage: percent(ds.games_with_goal, ds.games_played),
    })
}
