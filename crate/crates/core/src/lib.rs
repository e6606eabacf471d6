//! Goal-scoring reliability from censored duration data.
//!
//! Each goal is a record timed from the player's pitch entry; each goalless
//! game is a censored record at the minutes played. From there the crate
//! fits product-limit reliability curves per way of scoring, compares two
//! players with the log-rank test and confidence-band overlap, combines the
//! per-mode curves under competing failure modes, and tallies minute-by-minute
//! superiority points.
//!
//! ```
//! use goal_reliability::{fit_km, KmInput};
//!
//! let input = KmInput::new(vec![10.0, 20.0, 30.0], vec![true, false, true]).unwrap();
//! let curve = fit_km(&input, 0.95).unwrap();
//! assert_eq!(curve.times, vec![10.0, 30.0]);
//! assert!((curve.evaluate(15.0).estimate - 2.0 / 3.0).abs() < 1e-12);
//! ```
//!
//! Runnable walkthroughs live in `examples/`; `cargo run --example` lists them.

pub mod cfm;
pub mod compare;
pub mod descriptives;
pub mod error;
pub mod ingest;
pub mod km;
pub mod model;
pub mod points;
pub mod report;

pub use cfm::{fit_cfm, restrict_to_mode, select_modes, CfmConfig, CfmCurve};
pub use compare::{chi_square_1df_pvalue, ci_overlap, log_rank, LogRankResult, OverlapVerdict, Verdict};
pub use descriptives::{summarize, SummaryTable};
pub use error::{Error, Result};
pub use ingest::{generate_fixture, load_csv, write_csv, FixtureSpec, IngestConfig};
pub use km::{ci_bounds, fit_km, KmInput};
pub use model::{evaluate_curve, validate_dataset, GoalMode, Observation, PlayerDataset, ReliabilityCurve};
pub use points::{minute_histogram, points_comparison, MinuteHistogram, PointsTable};
pub use report::{export_bundle, run_pipeline, ExportFormat, PipelineConfig, ReportBundle};
