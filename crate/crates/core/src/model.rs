//! Domain types shared by every analysis stage.
//!
//! A [`PlayerDataset`] holds one record per goal (uncensored, stamped with the
//! minute since the player entered the pitch) and one record per goalless
//! game (censored at the minutes actually played). Exposure after the last
//! goal of a scoring game is not recorded.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Longest exposure a single record may carry: regulation plus extra time.
pub const MAX_MINUTES: f64 = 120.0;

/// Way a goal was scored. Integer codes follow the file format (1..=6).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GoalMode {
    PenaltyKick = 1,
    HeadHeader = 2,
    DirectFreeKick = 3,
    LongRangeKick = 4,
    RightFootedKick = 5,
    LeftFootedKick = 6,
}

impl GoalMode {
    pub const ALL: [GoalMode; 6] = [
        GoalMode::PenaltyKick,
        GoalMode::HeadHeader,
        GoalMode::DirectFreeKick,
        GoalMode::LongRangeKick,
        GoalMode::RightFootedKick,
        GoalMode::LeftFootedKick,
    ];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.get(usize::from(code).wrapping_sub(1)).copied()
    }

    /// Machine name, also used in export file names.
    pub fn name(self) -> &'static str {
        match self {
            GoalMode::PenaltyKick => "penalty_kick",
            GoalMode::HeadHeader => "head_header",
            GoalMode::DirectFreeKick => "direct_free_kick",
            GoalMode::LongRangeKick => "long_range_kick",
            GoalMode::RightFootedKick => "right_footed_kick",
            GoalMode::LeftFootedKick => "left_footed_kick",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            GoalMode::PenaltyKick => "Penalty Kick",
            GoalMode::HeadHeader => "Head Header",
            GoalMode::DirectFreeKick => "Direct Free Kick",
            GoalMode::LongRangeKick => "Long-Range Kick",
            GoalMode::RightFootedKick => "Right-Footed Kick",
            GoalMode::LeftFootedKick => "Left-Footed Kick",
        }
    }
}

impl fmt::Display for GoalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Accepts the integer code or a name in any case, with or without
/// separators (`5`, `right_footed_kick`, `Right-Footed Kick`, `RightFootedKick`).
impl FromStr for GoalMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        if let Ok(code) = trimmed.parse::<u8>() {
            return Self::from_code(code).ok_or_else(|| Error::UnknownMode(s.to_string()));
        }
        let key: String = trimmed
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        let mode = match key.as_str() {
            "penaltykick" | "penalty" => GoalMode::PenaltyKick,
            "headheader" | "header" | "head" => GoalMode::HeadHeader,
            "directfreekick" | "freekick" => GoalMode::DirectFreeKick,
            "longrangekick" | "longdistancekick" | "longrange" => GoalMode::LongRangeKick,
            "rightfootedkick" | "rightfoot" | "rightfooted" => GoalMode::RightFootedKick,
            "leftfootedkick" | "leftfoot" | "leftfooted" => GoalMode::LeftFootedKick,
            _ => return Err(Error::UnknownMode(s.to_string())),
        };
        Ok(mode)
    }
}

/// Parses stoppage-time notation such as `45+2` or `90+3` and returns the
/// base minute the record is analysed at.
pub fn stoppage_base_minute(label: &str) -> Option<f64> {
    let (base, added) = label.trim().split_once('+')?;
    let base: u32 = base.trim().parse().ok()?;
    let _: u32 = added.trim().parse().ok()?;
    (base > 0).then_some(f64::from(base))
}

/// One duration record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub match_id: String,
    pub season: String,
    /// Minutes from pitch entry to the goal, or to the end of exposure for a
    /// goalless game.
    pub duration_minutes: f64,
    /// `true` when no goal was observed (file column `censored` = 0).
    pub censored: bool,
    /// Present exactly when the record is a goal.
    pub mode: Option<GoalMode>,
    pub raw_minute_label: Option<String>,
}

impl Observation {
    pub fn goal(match_id: &str, season: &str, minute: f64, mode: GoalMode) -> Self {
        Self {
            match_id: match_id.to_string(),
            season: season.to_string(),
            duration_minutes: minute,
            censored: false,
            mode: Some(mode),
            raw_minute_label: None,
        }
    }

    pub fn no_goal(match_id: &str, season: &str, minutes_played: f64) -> Self {
        Self {
            match_id: match_id.to_string(),
            season: season.to_string(),
            duration_minutes: minutes_played,
            censored: true,
            mode: None,
            raw_minute_label: None,
        }
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.raw_minute_label = Some(label.to_string());
        self
    }

    /// Minute used by every analysis: the stoppage base when the raw label
    /// carries `B+x` notation, the stored duration otherwise.
    pub fn analysis_minute(&self) -> f64 {
        self.raw_minute_label
            .as_deref()
            .and_then(stoppage_base_minute)
            .unwrap_or(self.duration_minutes)
    }

    pub fn is_goal(&self) -> bool {
        !self.censored
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerDataset {
    pub player_name: String,
    pub observations: Vec<Observation>,
    pub games_played: usize,
    pub games_with_goal: usize,
}

impl PlayerDataset {
    /// Builds a dataset and derives the game counts from distinct match ids.
    pub fn from_observations(player_name: &str, observations: Vec<Observation>) -> Self {
        let mut games = HashSet::new();
        let mut scoring = HashSet::new();
        for obs in &observations {
            games.insert(obs.match_id.as_str());
            if obs.is_goal() {
                scoring.insert(obs.match_id.as_str());
            }
        }
        let (games_played, games_with_goal) = (games.len(), scoring.len());
        Self {
            player_name: player_name.to_string(),
            observations,
            games_played,
            games_with_goal,
        }
    }

    pub fn censored_count(&self) -> usize {
        self.observations.iter().filter(|o| o.censored).count()
    }

    pub fn uncensored_count(&self) -> usize {
        self.observations.len() - self.censored_count()
    }

    pub fn goals(&self) -> impl Iterator<Item = &Observation> {
        self.observations.iter().filter(|o| o.is_goal())
    }

    pub fn goals_in_mode(&self, mode: GoalMode) -> usize {
        self.goals().filter(|o| o.mode == Some(mode)).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ViolationKind {
    DurationOutOfRange(f64),
    CensoredWithMode(GoalMode),
    GoalWithoutMode,
    GoalsExceedGames {
        games_with_goal: usize,
        games_played: usize,
    },
    CensoredCountMismatch {
        censored: usize,
        expected: usize,
    },
    RecordsWithoutGames,
}

/// One broken invariant. `record` is the index into `observations` when the
/// problem belongs to a single record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub record: Option<usize>,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(i) = self.record {
            write!(f, "record {i}: ")?;
        }
        match &self.kind {
            ViolationKind::DurationOutOfRange(d) => {
                write!(f, "duration {d} outside (0, {MAX_MINUTES}]")
            }
            ViolationKind::CensoredWithMode(m) => write!(f, "censored record carries mode {m}"),
            ViolationKind::GoalWithoutMode => f.write_str("goal record has no mode"),
            ViolationKind::GoalsExceedGames {
                games_with_goal,
                games_played,
            } => write!(
                f,
                "games with goal ({games_with_goal}) exceed games played ({games_played})"
            ),
            ViolationKind::CensoredCountMismatch { censored, expected } => write!(
                f,
                "{censored} censored records, expected one per goalless game ({expected})"
            ),
            ViolationKind::RecordsWithoutGames => f.write_str("records present but no games played"),
        }
    }
}

/// Checks every record and dataset invariant. An empty list means valid.
pub fn validate_dataset(ds: &PlayerDataset) -> Vec<Violation> {
    let mut out = Vec::new();
    for (i, obs) in ds.observations.iter().enumerate() {
        let d = obs.duration_minutes;
        if !(d > 0.0 && d <= MAX_MINUTES) {
            out.push(Violation {
                record: Some(i),
                kind: ViolationKind::DurationOutOfRange(d),
            });
        }
        match (obs.censored, obs.mode) {
            (true, Some(m)) => out.push(Violation {
                record: Some(i),
                kind: ViolationKind::CensoredWithMode(m),
            }),
            (false, None) => out.push(Violation {
                record: Some(i),
                kind: ViolationKind::GoalWithoutMode,
            }),
            _ => {}
        }
    }
    if ds.games_played == 0 && !ds.observations.is_empty() {
        out.push(Violation {
            record: None,
            kind: ViolationKind::RecordsWithoutGames,
        });
    }
    if ds.games_with_goal > ds.games_played {
        out.push(Violation {
            record: None,
            kind: ViolationKind::GoalsExceedGames {
                games_with_goal: ds.games_with_goal,
                games_played: ds.games_played,
            },
        });
    } else {
        let expected = ds.games_played - ds.games_with_goal;
        let censored = ds.censored_count();
        if censored != expected {
            out.push(Violation {
                record: None,
                kind: ViolationKind::CensoredCountMismatch { censored, expected },
            });
        }
    }
    out
}

/// Value of a fitted curve at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub estimate: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
}

/// Right-continuous step function produced by a Kaplan-Meier fit. Entry `k`
/// of every vector describes the curve from `times[k]` up to (not including)
/// `times[k + 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityCurve {
    pub times: Vec<f64>,
    pub estimates: Vec<f64>,
    pub variances: Vec<f64>,
    pub ci_lower: Vec<f64>,
    pub ci_upper: Vec<f64>,
    pub n_risk: Vec<usize>,
    pub n_event: Vec<usize>,
    pub n_total: usize,
    pub confidence: f64,
}

impl ReliabilityCurve {
    pub fn empty(n_total: usize, confidence: f64) -> Self {
        Self {
            times: Vec::new(),
            estimates: Vec::new(),
            variances: Vec::new(),
            ci_lower: Vec::new(),
            ci_upper: Vec::new(),
            n_risk: Vec::new(),
            n_event: Vec::new(),
            n_total,
            confidence,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Index of the last stored time `<= t`.
    fn step_index(&self, t: f64) -> Option<usize> {
        self.times.partition_point(|&x| x <= t).checked_sub(1)
    }

    /// Step-function value at `t`; `(1, 1, 1)` before the first event.
    pub fn evaluate(&self, t: f64) -> CurvePoint {
        match self.step_index(t) {
            None => CurvePoint {
                estimate: 1.0,
                ci_lower: 1.0,
                ci_upper: 1.0,
            },
            Some(k) => CurvePoint {
                estimate: self.estimates[k],
                ci_lower: self.ci_lower[k],
                ci_upper: self.ci_upper[k],
            },
        }
    }

    pub fn estimate_at(&self, t: f64) -> f64 {
        self.evaluate(t).estimate
    }

    /// Estimated variance at `t`; zero before the first event.
    pub fn variance_at(&self, t: f64) -> f64 {
        self.step_index(t).map_or(0.0, |k| self.variances[k])
    }
}

/// Free-function form of [`ReliabilityCurve::evaluate`].
pub fn evaluate_curve(curve: &ReliabilityCurve, t: f64) -> CurvePoint {
    curve.evaluate(t)
}
