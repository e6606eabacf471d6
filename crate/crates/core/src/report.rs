//! End-to-end two-player pipeline and plot-ready exports.
//!
//! CSV exports use six significant digits and a decimal point; JSON carries
//! full double precision and reads back into an identical [`ReportBundle`].

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cfm::{fit_cfm, restrict_to_mode, select_modes, CfmConfig, CfmCurve};
use crate::compare::{ci_overlap, default_grid, log_rank, LogRankResult, OverlapVerdict};
use crate::descriptives::{summarize, SummaryTable};
use crate::error::{Error, Result};
use crate::ingest::{load_csv, IngestConfig};
use crate::km::fit_km;
use crate::model::{GoalMode, PlayerDataset, ReliabilityCurve};
use crate::points::{minute_histogram, points_comparison, MinuteHistogram, PointsTable};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub cfm: CfmConfig,
    pub grid: Vec<f64>,
    /// Overrides the player names taken from the file stems.
    pub player_names: Option<(String, String)>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            cfm: CfmConfig::default(),
            grid: default_grid(),
            player_names: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LogRankRow {
    Tested(LogRankResult),
    InsufficientData { reason: String },
}

impl LogRankRow {
    pub fn result(&self) -> Option<&LogRankResult> {
        match self {
            LogRankRow::Tested(r) => Some(r),
            LogRankRow::InsufficientData { .. } => None,
        }
    }
}

/// Everything the two-player pipeline produces. Index 0 is player A.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub players: [String; 2],
    pub summaries: [SummaryTable; 2],
    pub km_curves: [BTreeMap<GoalMode, ReliabilityCurve>; 2],
    pub cfm_curves: [CfmCurve; 2],
    pub logrank_rows: BTreeMap<GoalMode, LogRankRow>,
    pub overlap: OverlapVerdict,
    pub histograms: [MinuteHistogram; 2],
    pub points: PointsTable,
}

fn fit_all_modes(ds: &PlayerDataset, confidence: f64) -> Result<BTreeMap<GoalMode, ReliabilityCurve>> {
    GoalMode::ALL
        .into_iter()
        .map(|m| Ok((m, fit_km(&restrict_to_mode(ds, m), confidence)?)))
        .collect()
}

/// Log-rank rows for every mode. A mode is tested only when it is part of
/// both players' combined-curve selection; otherwise it is marked as having
/// too little data.
pub fn logrank_rows(a: &PlayerDataset, b: &PlayerDataset, cfg: &CfmConfig) -> Result<BTreeMap<GoalMode, LogRankRow>> {
    let sel_a = select_modes(a, cfg).unwrap_or_default();
    let sel_b = select_modes(b, cfg).unwrap_or_default();
    let mut rows = BTreeMap::new();
    for mode in GoalMode::ALL {
        let row = if !(sel_a.contains(&mode) && sel_b.contains(&mode)) {
            LogRankRow::InsufficientData {
                reason: format!(
                    "{} vs {} goals; mode not selected for both players",
                    a.goals_in_mode(mode),
                    b.goals_in_mode(mode)
                ),
            }
        } else {
            match log_rank(&restrict_to_mode(a, mode), &restrict_to_mode(b, mode)) {
                Ok(r) => LogRankRow::Tested(r),
                Err(e @ (Error::NoEvents | Error::EmptyInput)) => {
                    LogRankRow::InsufficientData { reason: e.to_string() }
                }
                Err(e) => return Err(e),
            }
        };
        rows.insert(mode, row);
    }
    Ok(rows)
}

/// Runs every stage on two already-loaded datasets.
pub fn analyze(a: &PlayerDataset, b: &PlayerDataset, cfg: &PipelineConfig) -> Result<ReportBundle> {
    let summaries = [summarize(a)?, summarize(b)?];
    let (km_a, km_b) = std::thread::scope(|s| {
        let ha = s.spawn(|| fit_all_modes(a, cfg.cfm.confidence));
        let kb = fit_all_modes(b, cfg.cfm.confidence);
        (ha.join().expect("fit thread panicked"), kb)
    });
    let km_curves = [km_a?, km_b?];
    let logrank_rows = logrank_rows(a, b, &cfg.cfm)?;
    let cfm_curves = [fit_cfm(a, &cfg.cfm)?, fit_cfm(b, &cfg.cfm)?];
    let overlap = ci_overlap(&cfm_curves[0].combined, &cfm_curves[1].combined, &cfg.grid)?;
    let histograms = [minute_histogram(a), minute_histogram(b)];
    let points = points_comparison(&histograms[0], &histograms[1]);
    Ok(ReportBundle {
        players: [a.player_name.clone(), b.player_name.clone()],
        summaries,
        km_curves,
        cfm_curves,
        logrank_rows,
        overlap,
        histograms,
        points,
    })
}

/// Loads both files and runs the full analysis.
pub fn run_pipeline(path_a: &Path, path_b: &Path, cfg: &PipelineConfig) -> Result<ReportBundle> {
    let mut ingest_a = IngestConfig::new(path_a);
    let mut ingest_b = IngestConfig::new(path_b);
    if let Some((name_a, name_b)) = &cfg.player_names {
        ingest_a = ingest_a.player(name_a);
        ingest_b = ingest_b.player(name_b);
    }
    let a = load_csv(&ingest_a)?;
    let b = load_csv(&ingest_b)?;
    analyze(&a, &b, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExportFormat {
    #[default]
    Csv,
    Json,
}

/// Six significant digits, trailing zeros trimmed.
pub fn fmt_sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (5 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn slug(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_lowercase()
            } else {
                '_'
            }
        })
        .collect();
    if s.is_empty() {
        "player".into()
    } else {
        s
    }
}

/// File-name tokens for the two players; suffixed `_a`/`_b` when they would
/// otherwise collide.
pub fn player_tokens(bundle: &ReportBundle) -> [String; 2] {
    let a = slug(&bundle.players[0]);
    let b = slug(&bundle.players[1]);
    if a == b {
        [format!("{a}_a"), format!("{b}_b")]
    } else {
        [a, b]
    }
}

pub fn write_summary_csv<W: Write>(s: &SummaryTable, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["variable", "frequency", "percentage"])?;
    let pct = |p: f64| format!("{p:.2}");
    w.write_record(["games_played", &s.games_played.to_string(), &pct(100.0)])?;
    w.write_record(["censored", &s.censored_count.to_string(), &pct(s.censored_percentage)])?;
    w.write_record([
        "uncensored",
        &s.uncensored_count.to_string(),
        &pct(s.uncensored_percentage),
    ])?;
    w.write_record(["total_records", &s.total_records.to_string(), &pct(100.0)])?;
    for (mode, count) in &s.mode_counts {
        w.write_record([mode.name(), &count.to_string(), &pct(s.mode_percentages[mode])])?;
    }
    w.write_record([
        "games_with_goal",
        &s.games_with_goal.to_string(),
        &pct(s.games_with_goal_percentage),
    ])?;
    w.write_record(["goals_per_match", &format!("{:.2}", s.goals_per_match), ""])?;
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub const CURVE_HEADER: [&str; 7] = [
    "time", "estimate", "variance", "ci_lower", "ci_upper", "n_risk", "n_event",
];

pub fn write_curve_csv<W: Write>(c: &ReliabilityCurve, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CURVE_HEADER)?;
    for k in 0..c.len() {
        w.write_record([
            fmt_sig6(c.times[k]),
            fmt_sig6(c.estimates[k]),
            fmt_sig6(c.variances[k]),
            fmt_sig6(c.ci_lower[k]),
            fmt_sig6(c.ci_upper[k]),
            c.n_risk[k].to_string(),
            c.n_event[k].to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn write_logrank_csv<W: Write>(rows: &BTreeMap<GoalMode, LogRankRow>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "mode",
        "chi_square",
        "df",
        "p_value",
        "observed_a",
        "expected_a",
        "status",
    ])?;
    for (mode, row) in rows {
        match row {
            LogRankRow::Tested(r) => w.write_record([
                mode.name().to_string(),
                fmt_sig6(r.chi_square),
                r.degrees_freedom.to_string(),
                fmt_sig6(r.p_value),
                fmt_sig6(r.observed_a),
                fmt_sig6(r.expected_a),
                "tested".into(),
            ])?,
            LogRankRow::InsufficientData { .. } => {
                w.write_record([mode.name(), "", "", "", "", "", "insufficient_data"])?
            }
        }
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn write_histogram_csv<W: Write>(a: &MinuteHistogram, b: &MinuteHistogram, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["minute", "count_a", "count_b"])?;
    for m in 1..=a.counts.len() {
        w.write_record([m.to_string(), a.at(m).to_string(), b.at(m).to_string()])?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn write_points_csv<W: Write>(p: &PointsTable, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["segment", "points_a", "points_b", "draws"])?;
    for s in &p.segments {
        w.write_record([
            s.label.clone(),
            s.points_a.to_string(),
            s.points_b.to_string(),
            s.draws.to_string(),
        ])?;
    }
    w.write_record([
        "total".to_string(),
        p.points_a_total.to_string(),
        p.points_b_total.to_string(),
        p.draws_total.to_string(),
    ])?;
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn write_overlap_csv<W: Write>(v: &OverlapVerdict, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["time", "overlap"])?;
    for (t, f) in v.grid.iter().zip(&v.overlap_flags) {
        w.write_record([fmt_sig6(*t), u8::from(*f).to_string()])?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub const JSON_BUNDLE_FILE: &str = "report.json";

fn create(path: &Path) -> Result<fs::File> {
    fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes the bundle under `out_dir` (created if missing) and returns the
/// written paths in write order.
pub fn export_bundle(bundle: &ReportBundle, out_dir: &Path, format: ExportFormat) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    let mut emit = |name: String, f: &dyn Fn(fs::File) -> Result<()>| -> Result<()> {
        let path = out_dir.join(name);
        f(create(&path)?)?;
        written.push(path);
        Ok(())
    };

    match format {
        ExportFormat::Json => {
            emit(JSON_BUNDLE_FILE.into(), &|f| {
                serde_json::to_writer_pretty(f, bundle)?;
                Ok(())
            })?;
        }
        ExportFormat::Csv => {
            let tokens = player_tokens(bundle);
            for (slot, summary) in ["a", "b"].iter().zip(&bundle.summaries) {
                emit(format!("summary_{slot}.csv"), &|f| write_summary_csv(summary, f))?;
            }
            for (token, curves) in tokens.iter().zip(&bundle.km_curves) {
                for (mode, curve) in curves {
                    emit(format!("km_{token}_{}.csv", mode.name()), &|f| {
                        write_curve_csv(curve, f)
                    })?;
                }
            }
            for (token, cfm) in tokens.iter().zip(&bundle.cfm_curves) {
                emit(format!("cfm_{token}.csv"), &|f| write_curve_csv(&cfm.combined, f))?;
            }
            emit("logrank.csv".into(), &|f| write_logrank_csv(&bundle.logrank_rows, f))?;
            emit("histogram.csv".into(), &|f| {
                write_histogram_csv(&bundle.histograms[0], &bundle.histograms[1], f)
            })?;
            emit("points.csv".into(), &|f| write_points_csv(&bundle.points, f))?;
            emit("overlap.csv".into(), &|f| write_overlap_csv(&bundle.overlap, f))?;
        }
    }
    Ok(written)
}

/// Reads a bundle previously exported as JSON.
pub fn read_json_bundle(path: &Path) -> Result<ReportBundle> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

/// Modes in the union of both combined-curve selections.
pub fn included_modes(bundle: &ReportBundle) -> BTreeSet<GoalMode> {
    bundle.cfm_curves.iter().flat_map(|c| c.modes()).collect()
}
