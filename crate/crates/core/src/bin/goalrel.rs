use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use goal_reliability::cfm::{fit_cfm, CfmConfig, DEFAULT_MIN_EVENTS};
use goal_reliability::error::{Error, Result};
use goal_reliability::ingest::{load_csv, IngestConfig};
use goal_reliability::km::fit_km;
use goal_reliability::model::{validate_dataset, GoalMode, PlayerDataset};
use goal_reliability::points::{minute_histogram, points_comparison};
use goal_reliability::report::{self, analyze, export_bundle, ExportFormat, PipelineConfig};
use goal_reliability::{restrict_to_mode, summarize};

#[derive(Parser)]
#[command(name = "goalrel", version, about = "Goal-scoring reliability analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for ExportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => ExportFormat::Csv,
            Format::Json => ExportFormat::Json,
        }
    }
}

#[derive(Args)]
struct One {
    #[arg(long)]
    input: PathBuf,
    /// Player name; defaults to the file stem.
    #[arg(long)]
    player: Option<String>,
}

#[derive(Args)]
struct Two {
    #[arg(long)]
    input_a: PathBuf,
    #[arg(long)]
    input_b: PathBuf,
}

#[derive(Args)]
struct Modeling {
    /// Comma-separated mode names or codes; overrides --min-events.
    #[arg(long, value_parser = parse_modes)]
    modes: Option<BTreeSet<GoalMode>>,
    #[arg(long, default_value_t = DEFAULT_MIN_EVENTS)]
    min_events: usize,
    #[arg(long, default_value_t = 0.95)]
    confidence: f64,
}

impl Modeling {
    fn cfm_config(&self) -> CfmConfig {
        CfmConfig {
            included_modes: self.modes.clone(),
            min_events_per_mode: self.min_events,
            confidence: self.confidence,
        }
    }
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Directory for output files; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a file against the record and dataset rules.
    Validate(One),
    /// Data characteristics and goal distribution.
    Summarize {
        #[command(flatten)]
        input: One,
        #[command(flatten)]
        output: Output,
    },
    /// Per-mode reliability curves.
    Km {
        #[command(flatten)]
        input: One,
        #[command(flatten)]
        modeling: Modeling,
        #[command(flatten)]
        output: Output,
    },
    /// Per-mode log-rank tests between two players.
    Logrank {
        #[command(flatten)]
        inputs: Two,
        #[command(flatten)]
        modeling: Modeling,
        #[command(flatten)]
        output: Output,
    },
    /// Combined competing-modes curve.
    Cfm {
        #[command(flatten)]
        input: One,
        #[command(flatten)]
        modeling: Modeling,
        #[command(flatten)]
        output: Output,
    },
    /// Per-minute histogram and superiority points.
    Points {
        #[command(flatten)]
        inputs: Two,
        #[command(flatten)]
        output: Output,
    },
    /// Full two-player pipeline.
    Report {
        #[command(flatten)]
        inputs: Two,
        #[command(flatten)]
        modeling: Modeling,
        /// `a..b` (inclusive integer minutes) or a comma-separated list.
        #[arg(long, value_parser = parse_grid, default_value = "1..120")]
        grid: Grid,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_modes(s: &str) -> std::result::Result<BTreeSet<GoalMode>, String> {
    let modes = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.parse::<GoalMode>().map_err(|e| e.to_string()))
        .collect::<std::result::Result<BTreeSet<_>, _>>()?;
    if modes.is_empty() {
        return Err("no modes given".into());
    }
    Ok(modes)
}

#[derive(Clone)]
struct Grid(Vec<f64>);

fn parse_grid(s: &str) -> std::result::Result<Grid, String> {
    let points: Vec<f64> = if let Some((lo, hi)) = s.split_once("..") {
        let lo: u32 = lo.trim().parse().map_err(|_| format!("bad grid start `{lo}`"))?;
        let hi: u32 = hi.trim().parse().map_err(|_| format!("bad grid end `{hi}`"))?;
        (lo..=hi).map(f64::from).collect()
    } else {
        s.split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| format!("bad grid time `{p}`")))
            .collect::<std::result::Result<_, _>>()?
    };
    if points.is_empty() || points.iter().any(|t| t.is_nan() || *t < 0.0) {
        return Err("grid must hold at least one non-negative time".into());
    }
    Ok(Grid(points))
}

fn load(path: &Path, player: Option<&str>) -> Result<PlayerDataset> {
    let mut cfg = IngestConfig::new(path);
    if let Some(name) = player {
        cfg = cfg.player(name);
    }
    load_csv(&cfg)
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Sends one artifact to stdout or to `out/<stem>.<ext>`.
fn emit<T: Serialize>(
    output: &Output,
    stem: &str,
    value: &T,
    csv: impl Fn(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    let mut buf = Vec::new();
    let ext = match output.format {
        Format::Csv => {
            csv(&mut buf)?;
            "csv"
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, value)?;
            buf.push(b'\n');
            "json"
        }
    };
    match &output.out {
        None => {
            if output.format == Format::Csv {
                println!("# {stem}");
            }
            io::stdout().write_all(&buf).map_err(io_err(Path::new("<stdout>")))
        }
        Some(dir) => {
            fs::create_dir_all(dir).map_err(io_err(dir))?;
            let path = dir.join(format!("{stem}.{ext}"));
            fs::write(&path, &buf).map_err(io_err(&path))?;
            println!("{}", path.display());
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Validate(one) => {
            let mut cfg = IngestConfig::new(&one.input).strict(false);
            if let Some(name) = &one.player {
                cfg = cfg.player(name);
            }
            match load_csv(&cfg) {
                Ok(ds) => {
                    let violations = validate_dataset(&ds);
                    for v in &violations {
                        println!("{}: {v}", one.input.display());
                    }
                    if violations.is_empty() {
                        println!(
                            "{}: ok ({} records, {} games, {} with a goal)",
                            one.input.display(),
                            ds.observations.len(),
                            ds.games_played,
                            ds.games_with_goal
                        );
                    }
                    Ok(violations.is_empty())
                }
                Err(Error::Rows { path, errors }) => {
                    for e in &errors {
                        println!("{}: {e}", path.display());
                    }
                    Ok(false)
                }
                Err(e) => Err(e),
            }
        }
        Command::Summarize { input, output } => {
            let ds = load(&input.input, input.player.as_deref())?;
            let summary = summarize(&ds)?;
            emit(&output, &format!("summary_{}", ds.player_name), &summary, |w| {
                report::write_summary_csv(&summary, w)
            })?;
            Ok(true)
        }
        Command::Km {
            input,
            modeling,
            output,
        } => {
            let ds = load(&input.input, input.player.as_deref())?;
            let modes: Vec<GoalMode> = match &modeling.modes {
                Some(m) => m.iter().copied().collect(),
                None => GoalMode::ALL.to_vec(),
            };
            for mode in modes {
                let curve = fit_km(&restrict_to_mode(&ds, mode), modeling.confidence)?;
                emit(&output, &format!("km_{}_{mode}", ds.player_name), &curve, |w| {
                    report::write_curve_csv(&curve, w)
                })?;
            }
            Ok(true)
        }
        Command::Logrank {
            inputs,
            modeling,
            output,
        } => {
            let a = load(&inputs.input_a, None)?;
            let b = load(&inputs.input_b, None)?;
            let rows = report::logrank_rows(&a, &b, &modeling.cfm_config())?;
            emit(&output, "logrank", &rows, |w| report::write_logrank_csv(&rows, w))?;
            Ok(true)
        }
        Command::Cfm {
            input,
            modeling,
            output,
        } => {
            let ds = load(&input.input, input.player.as_deref())?;
            let cfm = fit_cfm(&ds, &modeling.cfm_config())?;
            emit(&output, &format!("cfm_{}", ds.player_name), &cfm, |w| {
                report::write_curve_csv(&cfm.combined, w)
            })?;
            Ok(true)
        }
        Command::Points { inputs, output } => {
            let a = load(&inputs.input_a, None)?;
            let b = load(&inputs.input_b, None)?;
            let (ha, hb) = (minute_histogram(&a), minute_histogram(&b));
            let points = points_comparison(&ha, &hb);
            emit(&output, "histogram", &[&ha, &hb], |w| {
                report::write_histogram_csv(&ha, &hb, w)
            })?;
            emit(&output, "points", &points, |w| report::write_points_csv(&points, w))?;
            Ok(true)
        }
        Command::Report {
            inputs,
            modeling,
            grid,
            format,
            out,
        } => {
            let a = load(&inputs.input_a, None)?;
            let b = load(&inputs.input_b, None)?;
            let cfg = PipelineConfig {
                cfm: modeling.cfm_config(),
                grid: grid.0,
                player_names: None,
            };
            let bundle = analyze(&a, &b, &cfg)?;
            for path in export_bundle(&bundle, &out, format.into())? {
                println!("{}", path.display());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
