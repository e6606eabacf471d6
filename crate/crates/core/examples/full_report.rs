//! End to end: fixtures on disk, the full pipeline, and a CSV export.
//!
//! `cargo run --example full_report -- [out_dir]` (defaults to a temp dir)

use std::env;
use std::path::PathBuf;

use goal_reliability::ingest::write_csv_file;
use goal_reliability::{export_bundle, generate_fixture, run_pipeline, ExportFormat, FixtureSpec, PipelineConfig};

fn main() -> goal_reliability::Result<()> {
    let out: PathBuf = env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| env::temp_dir().join("goal_reliability_report"));
    let data = out.join("input");
    std::fs::create_dir_all(&data).map_err(|source| goal_reliability::Error::Io {
        path: data.clone(),
        source,
    })?;
    let a = data.join("ronaldo.csv");
    let b = data.join("messi.csv");
    write_csv_file(&generate_fixture(&FixtureSpec::ronaldo(1))?, &a)?;
    write_csv_file(&generate_fixture(&FixtureSpec::messi(2))?, &b)?;

    let bundle = run_pipeline(&a, &b, &PipelineConfig::default())?;
    println!(
        "combined-curve bands overlap on {:.0}% of minutes: {:?}",
        100.0 * bundle.overlap.fraction_overlapping,
        bundle.overlap.verdict
    );
    for path in export_bundle(&bundle, &out, ExportFormat::Csv)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
