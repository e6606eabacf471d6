//! Per-minute goal counts and the minute-by-minute superiority tally.

use serde::{Deserialize, Serialize};

use crate::model::{PlayerDataset, MAX_MINUTES};

pub const MINUTES: usize = MAX_MINUTES as usize;

/// First half, second half, extra time (1-based, inclusive).
pub const SEGMENTS: [(&str, usize, usize); 3] = [("1-45", 1, 45), ("46-90", 46, 90), ("91-120", 91, 120)];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinuteHistogram {
    /// `counts[m - 1]` holds the goals credited to minute `m`.
    pub counts: Vec<u32>,
}

impl Default for MinuteHistogram {
    fn default() -> Self {
        Self {
            counts: vec![0; MINUTES],
        }
    }
}

impl MinuteHistogram {
    pub fn from_counts(counts: [u32; MINUTES]) -> Self {
        Self {
            counts: counts.to_vec(),
        }
    }

    /// Goals at 1-based `minute`.
    pub fn at(&self, minute: usize) -> u32 {
        self.counts[minute - 1]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| u64::from(c)).sum()
    }
}

/// Minute a goal is credited to: `t` in `(m - 1, m]` goes to `m`, clamped
/// into `1..=120`.
pub fn minute_index(t: f64) -> usize {
    (t.ceil() as usize).clamp(1, MINUTES)
}

pub fn minute_histogram(ds: &PlayerDataset) -> MinuteHistogram {
    let mut hist = MinuteHistogram::default();
    for goal in ds.goals() {
        hist.counts[minute_index(goal.analysis_minute()) - 1] += 1;
    }
    hist
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentPoints {
    pub label: String,
    pub points_a: u32,
    pub points_b: u32,
    pub draws: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointsTable {
    pub segments: Vec<SegmentPoints>,
    pub points_a_total: u32,
    pub points_b_total: u32,
    pub draws_total: u32,
}

fn tally<F>(mut compare: F) -> PointsTable
where
    F: FnMut(usize) -> std::cmp::Ordering,
{
    use std::cmp::Ordering;

    let segments: Vec<SegmentPoints> = SEGMENTS
        .iter()
        .map(|&(label, first, last)| {
            let mut seg = SegmentPoints {
                label: label.to_string(),
                points_a: 0,
                points_b: 0,
                draws: 0,
            };
            for m in first..=last {
                match compare(m) {
                    Ordering::Greater => seg.points_a += 1,
                    Ordering::Less => seg.points_b += 1,
                    Ordering::Equal => seg.draws += 1,
                }
            }
            seg
        })
        .collect();
    PointsTable {
        points_a_total: segments.iter().map(|s| s.points_a).sum(),
        points_b_total: segments.iter().map(|s| s.points_b).sum(),
        draws_total: segments.iter().map(|s| s.draws).sum(),
        segments,
    }
}

/// One point per minute to whichever player has more goals at that minute,
/// a draw on equal counts.
pub fn points_comparison(a: &MinuteHistogram, b: &MinuteHistogram) -> PointsTable {
    tally(|m| a.at(m).cmp(&b.at(m)))
}

/// Same tally with counts divided by games played before comparing.
pub fn points_comparison_per_game(
    a: &MinuteHistogram,
    games_a: usize,
    b: &MinuteHistogram,
    games_b: usize,
) -> PointsTable {
    // cross-multiplied to keep ties exact
    tally(|m| {
        let lhs = u64::from(a.at(m)) * games_b as u64;
        let rhs = u64::from(b.at(m)) * games_a as u64;
        lhs.cmp(&rhs)
    })
}
