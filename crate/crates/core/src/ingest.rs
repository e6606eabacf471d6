//! Match-event files and synthetic fixtures.
//!
//! # File format
//!
//! UTF-8 CSV with the exact header
//!
//! ```text
//! match_id,season,minute,censored,mode,raw_minute_label
//! ```
//!
//! * `minute`: positive decimal, at most 120, minutes since the player
//!   entered the pitch.
//! * `censored`: the censoring status code, **1 = scored a goal
//!   (uncensored), 0 = no goal (censored)**. In memory this is inverted:
//!   [`Observation::censored`] is `true` exactly when the column holds `0`.
//! * `mode`: way of scoring, `1..=6` or a case-insensitive name; blank on
//!   censored rows.
//! * `raw_minute_label`: optional clock reading. Stoppage notation `B+x`
//!   (e.g. `45+2`) sets the analysed minute to `B`.
//!
//! Each goal is one row; each goalless game is one censored row at the
//! minutes played.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, RowError};
use crate::model::{stoppage_base_minute, validate_dataset, GoalMode, Observation, PlayerDataset, MAX_MINUTES};

pub const HEADER: [&str; 6] = ["match_id", "season", "minute", "censored", "mode", "raw_minute_label"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestConfig {
    pub input_path: PathBuf,
    pub player_name: String,
    /// Stop at the first bad row instead of collecting all of them.
    pub strict: bool,
}

impl IngestConfig {
    /// Player name defaults to the file stem.
    pub fn new(input_path: impl Into<PathBuf>) -> Self {
        let input_path = input_path.into();
        let player_name = input_path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Self {
            input_path,
            player_name,
            strict: true,
        }
    }

    pub fn player(mut self, name: &str) -> Self {
        self.player_name = name.to_string();
        self
    }

    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }
}

pub fn load_csv(cfg: &IngestConfig) -> Result<PlayerDataset> {
    if cfg.input_path.as_os_str().is_empty() {
        return Err(Error::Io {
            path: cfg.input_path.clone(),
            source: std::io::Error::new(std::io::ErrorKind::InvalidInput, "empty input path"),
        });
    }
    let file = File::open(&cfg.input_path).map_err(|source| Error::Io {
        path: cfg.input_path.clone(),
        source,
    })?;
    read_csv(file, &cfg.input_path, &cfg.player_name, cfg.strict)
}

struct MatchSeen {
    censored_line: Option<u64>,
    goal_line: Option<u64>,
}

fn parse_row(record: &csv::StringRecord, line: u64) -> Result<Observation, RowError> {
    if record.len() != HEADER.len() {
        return Err(RowError::new(
            line,
            "row",
            format!("expected {} columns, found {}", HEADER.len(), record.len()),
        ));
    }
    let match_id = record[0].trim();
    if match_id.is_empty() {
        return Err(RowError::new(line, "match_id", "empty"));
    }
    let label = Some(record[5].trim()).filter(|s| !s.is_empty());
    let minute: f64 = record[2]
        .trim()
        .parse()
        .map_err(|_| RowError::new(line, "minute", format!("not a number: `{}`", &record[2])))?;
    if !(minute > 0.0 && minute <= MAX_MINUTES) {
        return Err(RowError::new(line, "minute", format!("{minute} outside (0, 120]")));
    }
    let scored = match record[3].trim() {
        "1" => true,
        "0" => false,
        other => {
            return Err(RowError::new(
                line,
                "censored",
                format!("expected 0 or 1, found `{other}`"),
            ))
        }
    };
    let mode_field = record[4].trim();
    let mode = if mode_field.is_empty() {
        None
    } else {
        Some(
            mode_field
                .parse::<GoalMode>()
                .map_err(|_| RowError::new(line, "mode", format!("unknown mode `{mode_field}`")))?,
        )
    };
    match (scored, mode) {
        (false, Some(m)) => return Err(RowError::new(line, "mode", format!("censored row carries mode {m}"))),
        (true, None) => return Err(RowError::new(line, "mode", "goal row has no mode")),
        _ => {}
    }
    let duration_minutes = label.and_then(stoppage_base_minute).unwrap_or(minute);
    Ok(Observation {
        match_id: match_id.to_string(),
        season: record[1].trim().to_string(),
        duration_minutes,
        censored: !scored,
        mode,
        raw_minute_label: label.map(str::to_string),
    })
}

/// Parses CSV text from any reader. `path` only labels errors.
pub fn read_csv<R: Read>(reader: R, path: &Path, player_name: &str, strict: bool) -> Result<PlayerDataset> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let found: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if found != HEADER {
        return Err(Error::Header {
            path: path.to_path_buf(),
            expected: HEADER.join(","),
            found: found.join(","),
        });
    }

    let mut observations = Vec::new();
    let mut errors: Vec<RowError> = Vec::new();
    let mut seen: HashMap<String, MatchSeen> = HashMap::new();

    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let result = parse_row(&record, line).and_then(|obs| {
            let entry = seen.entry(obs.match_id.clone()).or_insert(MatchSeen {
                censored_line: None,
                goal_line: None,
            });
            if obs.censored {
                if let Some(prev) = entry.censored_line {
                    return Err(RowError::new(
                        line,
                        "match_id",
                        format!(
                            "duplicate censored record for `{}` (first on line {prev})",
                            obs.match_id
                        ),
                    ));
                }
                if let Some(prev) = entry.goal_line {
                    return Err(RowError::new(
                        line,
                        "censored",
                        format!("censored record for `{}` which has a goal on line {prev}", obs.match_id),
                    ));
                }
                entry.censored_line = Some(line);
            } else {
                if let Some(prev) = entry.censored_line {
                    return Err(RowError::new(
                        line,
                        "censored",
                        format!("goal for `{}` which has a censored record on line {prev}", obs.match_id),
                    ));
                }
                entry.goal_line.get_or_insert(line);
            }
            Ok(obs)
        });
        match result {
            Ok(obs) => observations.push(obs),
            Err(e) if strict => {
                return Err(Error::Row {
                    path: path.to_path_buf(),
                    source: e,
                })
            }
            Err(e) => errors.push(e),
        }
    }
    if !errors.is_empty() {
        return Err(Error::Rows {
            path: path.to_path_buf(),
            errors,
        });
    }

    let ds = PlayerDataset::from_observations(player_name, observations);
    let violations = validate_dataset(&ds);
    if let Some(first) = violations.first() {
        return Err(Error::InvalidDataset {
            player: ds.player_name,
            count: violations.len(),
            first: first.to_string(),
        });
    }
    Ok(ds)
}

/// Writes a dataset in the input format, row order preserved.
pub fn write_csv<W: Write>(ds: &PlayerDataset, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(HEADER)?;
    for obs in &ds.observations {
        wtr.write_record([
            obs.match_id.as_str(),
            obs.season.as_str(),
            &obs.duration_minutes.to_string(),
            if obs.censored { "0" } else { "1" },
            &obs.mode.map(|m| m.code().to_string()).unwrap_or_default(),
            obs.raw_minute_label.as_deref().unwrap_or(""),
        ])?;
    }
    wtr.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn write_csv_file(ds: &PlayerDataset, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_csv(ds, file)
}

/// Marginal counts a synthetic dataset must reproduce exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureSpec {
    pub player_name: String,
    pub games_played: usize,
    pub games_with_goal: usize,
    pub goals_by_mode: BTreeMap<GoalMode, usize>,
    /// Relative weight per goal minute (1..=120). Uniform over 1..=90 when absent.
    pub goal_minute_distribution: Option<BTreeMap<u32, f64>>,
    pub seed: u64,
}

impl FixtureSpec {
    fn career(name: &str, games: usize, scoring: usize, counts: [usize; 6], seed: u64) -> Self {
        Self {
            player_name: name.to_string(),
            games_played: games,
            games_with_goal: scoring,
            goals_by_mode: GoalMode::ALL.into_iter().zip(counts).collect(),
            goal_minute_distribution: None,
            seed,
        }
    }

    /// Cristiano Ronaldo, all competitions, 2002-03 to 2020-21.
    pub fn ronaldo(seed: u64) -> Self {
        Self::career("ronaldo", 1089, 525, [137, 136, 57, 11, 303, 143], seed)
    }

    /// Lionel Messi, all competitions, 2004-05 to 2020-21.
    pub fn messi(seed: u64) -> Self {
        Self::career("messi", 941, 492, [99, 28, 57, 1, 92, 477], seed)
    }

    pub fn total_goals(&self) -> usize {
        self.goals_by_mode.values().sum()
    }
}

/// Minutes played in a generated goalless game.
pub const FIXTURE_GOALLESS_MINUTES: f64 = 90.0;

const FIRST_SEASON: usize = 2002;
const SEASONS: usize = 19;

fn season_label(game: usize, games: usize) -> String {
    let k = game * SEASONS / games.max(1);
    let start = FIRST_SEASON + k;
    format!("{start}-{:02}", (start + 1) % 100)
}

/// Deterministic synthetic dataset whose game, goal and per-mode counts
/// equal the spec exactly.
pub fn generate_fixture(spec: &FixtureSpec) -> Result<PlayerDataset> {
    let goals = spec.total_goals();
    let (games, scoring) = (spec.games_played, spec.games_with_goal);
    if scoring > games {
        return Err(Error::InfeasibleFixture(format!(
            "games with goal ({scoring}) exceed games played ({games})"
        )));
    }
    if goals < scoring {
        return Err(Error::InfeasibleFixture(format!(
            "{goals} goals cannot cover {scoring} scoring games"
        )));
    }
    if goals > 0 && scoring == 0 {
        return Err(Error::InfeasibleFixture(format!("{goals} goals but no scoring game")));
    }
    let minute_sampler = match &spec.goal_minute_distribution {
        None => None,
        Some(weights) => {
            if let Some(&m) = weights.keys().find(|&&m| m == 0 || f64::from(m) > MAX_MINUTES) {
                return Err(Error::InfeasibleFixture(format!("goal minute {m} outside 1..=120")));
            }
            let minutes: Vec<u32> = weights.keys().copied().collect();
            let index = WeightedIndex::new(weights.values().copied())
                .map_err(|e| Error::InfeasibleFixture(format!("goal minute weights: {e}")))?;
            Some((minutes, index))
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut scoring_game = vec![false; games];
    for i in rand::seq::index::sample(&mut rng, games, scoring) {
        scoring_game[i] = true;
    }
    let mut goals_per_game = vec![0usize; scoring];
    for g in goals_per_game.iter_mut() {
        *g = 1;
    }
    for _ in scoring..goals {
        goals_per_game[rng.random_range(0..scoring)] += 1;
    }
    let mut modes: Vec<GoalMode> = spec
        .goals_by_mode
        .iter()
        .flat_map(|(&m, &c)| std::iter::repeat_n(m, c))
        .collect();
    modes.shuffle(&mut rng);
    let mut modes = modes.into_iter();

    let mut observations = Vec::with_capacity(goals + games - scoring);
    let mut next_scoring = 0;
    for (game, &scored) in scoring_game.iter().enumerate() {
        let match_id = format!("M{:04}", game + 1);
        let season = season_label(game, games);
        if !scored {
            observations.push(Observation::no_goal(&match_id, &season, FIXTURE_GOALLESS_MINUTES));
            continue;
        }
        let n = goals_per_game[next_scoring];
        next_scoring += 1;
        let mut minutes: Vec<u32> = (0..n)
            .map(|_| match &minute_sampler {
                Some((minutes, index)) => minutes[index.sample(&mut rng)],
                None => rng.random_range(1..=90),
            })
            .collect();
        minutes.sort_unstable();
        for minute in minutes {
            let mode = modes.next().expect("one mode per goal");
            observations.push(Observation::goal(&match_id, &season, f64::from(minute), mode));
        }
    }

    let ds = PlayerDataset::from_observations(&spec.player_name, observations);
    debug_assert!(validate_dataset(&ds).is_empty());
    Ok(ds)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEAD: &str = "match_id,season,minute,censored,mode,raw_minute_label\n";

    fn parse(body: &str) -> Result<PlayerDataset> {
        read_csv(format!("{HEAD}{body}").as_bytes(), Path::new("test.csv"), "p", true)
    }

    fn row_error(body: &str) -> RowError {
        match parse(body) {
            Err(Error::Row { source, .. }) => source,
            other => panic!("expected row error, got {other:?}"),
        }
    }

    #[test]
    fn goal_row() {
        let ds = parse("M001,2002-03,23,1,5,\n").unwrap();
        let o = &ds.observations[0];
        assert_eq!(o.duration_minutes, 23.0);
        assert!(!o.censored);
        assert_eq!(o.mode, Some(GoalMode::RightFootedKick));
        assert_eq!(o.raw_minute_label, None);
        assert_eq!((ds.games_played, ds.games_with_goal), (1, 1));
    }

    #[test]
    fn censored_row() {
        let ds = parse("M002,2002-03,90,0,,\n").unwrap();
        let o = &ds.observations[0];
        assert!(o.censored);
        assert_eq!(o.duration_minutes, 90.0);
        assert_eq!(o.mode, None);
        assert_eq!((ds.games_played, ds.games_with_goal), (1, 0));
    }

    #[test]
    fn named_modes_and_stoppage_labels() {
        let ds = parse("M1,2002-03,47,1,head header,45+2\nM1,2002-03,80,1,PENALTYKICK,\n").unwrap();
        assert_eq!(ds.observations[0].mode, Some(GoalMode::HeadHeader));
        assert_eq!(ds.observations[0].duration_minutes, 45.0);
        assert_eq!(ds.observations[0].raw_minute_label.as_deref(), Some("45+2"));
        assert_eq!(ds.observations[1].mode, Some(GoalMode::PenaltyKick));
    }

    #[test]
    fn malformed_rows() {
        let e = row_error("M1,2002-03,23,1,7,\n");
        assert_eq!((e.line, e.field.as_str()), (2, "mode"));
        let e = row_error("M1,2002-03,abc,1,5,\n");
        assert_eq!(e.field, "minute");
        let e = row_error("M1,2002-03,121,0,,\n");
        assert_eq!(e.field, "minute");
        let e = row_error("M1,2002-03,23,1,5\n");
        assert_eq!(e.field, "row");
        let e = row_error("M1,2002-03,23,2,5,\n");
        assert_eq!(e.field, "censored");
        let e = row_error("M1,2002-03,90,0,1,\n");
        assert_eq!(e.field, "mode");
        let e = row_error("M1,2002-03,90,1,,\n");
        assert_eq!(e.field, "mode");
    }

    #[test]
    fn duplicate_censored_match() {
        let e = row_error("M1,s,90,0,,\nM2,s,10,1,1,\nM1,s,90,0,,\n");
        assert_eq!((e.line, e.field.as_str()), (4, "match_id"));
        let e = row_error("M1,s,10,1,1,\nM1,s,90,0,,\n");
        assert_eq!((e.line, e.field.as_str()), (3, "censored"));
    }

    #[test]
    fn lenient_mode_collects_every_error() {
        let body = format!("{HEAD}M1,s,0,0,,\nM2,s,10,1,9,\nM3,s,10,1,1,\n");
        match read_csv(body.as_bytes(), Path::new("x.csv"), "p", false) {
            Err(Error::Rows { errors, .. }) => {
                assert_eq!(errors.iter().map(|e| e.line).collect::<Vec<_>>(), vec![2, 3]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn header_must_match() {
        let r = read_csv(
            "id,season,minute,censored,mode,raw\n".as_bytes(),
            Path::new("x"),
            "p",
            true,
        );
        assert!(matches!(r, Err(Error::Header { .. })));
    }

    #[test]
    fn missing_file() {
        let r = load_csv(&IngestConfig::new("/nonexistent/player.csv"));
        assert!(matches!(r, Err(Error::Io { .. })));
    }

    #[test]
    fn write_then_read() {
        let ds = generate_fixture(&FixtureSpec {
            player_name: "p".into(),
            games_played: 30,
            games_with_goal: 12,
            goals_by_mode: [(GoalMode::PenaltyKick, 5), (GoalMode::LeftFootedKick, 15)].into(),
            goal_minute_distribution: None,
            seed: 4,
        })
        .unwrap();
        let mut buf = Vec::new();
        write_csv(&ds, &mut buf).unwrap();
        let back = read_csv(buf.as_slice(), Path::new("mem"), "p", true).unwrap();
        assert_eq!(back, ds);
    }

    #[test]
    fn fixture_marginals() {
        let ds = generate_fixture(&FixtureSpec::ronaldo(7)).unwrap();
        assert_eq!(ds.games_played, 1089);
        assert_eq!(ds.games_with_goal, 525);
        assert_eq!(ds.censored_count(), 564);
        assert_eq!(ds.uncensored_count(), 787);
        let counts: Vec<usize> = GoalMode::ALL.iter().map(|&m| ds.goals_in_mode(m)).collect();
        assert_eq!(counts, vec![137, 136, 57, 11, 303, 143]);
        assert!(validate_dataset(&ds).is_empty());
        assert_eq!(ds.observations[0].season, "2002-03");
        assert_eq!(ds.observations.last().unwrap().season, "2020-21");
    }

    #[test]
    fn goalless_fixture() {
        let ds = generate_fixture(&FixtureSpec {
            player_name: "p".into(),
            games_played: 10,
            games_with_goal: 0,
            goals_by_mode: BTreeMap::new(),
            goal_minute_distribution: None,
            seed: 1,
        })
        .unwrap();
        assert_eq!(ds.censored_count(), 10);
        assert_eq!(ds.uncensored_count(), 0);
    }

    #[test]
    fn fixture_is_deterministic() {
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_csv(&generate_fixture(&FixtureSpec::messi(3)).unwrap(), &mut a).unwrap();
        write_csv(&generate_fixture(&FixtureSpec::messi(3)).unwrap(), &mut b).unwrap();
        assert_eq!(a, b);
        let mut c = Vec::new();
        write_csv(&generate_fixture(&FixtureSpec::messi(4)).unwrap(), &mut c).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn weighted_minutes() {
        let mut spec = FixtureSpec::messi(1);
        spec.goal_minute_distribution = Some([(93, 1.0), (110, 3.0)].into());
        let ds = generate_fixture(&spec).unwrap();
        assert!(ds
            .goals()
            .all(|o| o.duration_minutes == 93.0 || o.duration_minutes == 110.0));
        spec.goal_minute_distribution = Some([(0, 1.0)].into());
        assert!(matches!(generate_fixture(&spec), Err(Error::InfeasibleFixture(_))));
    }

    #[test]
    fn infeasible_fixtures() {
        let mut spec = FixtureSpec::ronaldo(1);
        spec.games_with_goal = 2000;
        assert!(matches!(generate_fixture(&spec), Err(Error::InfeasibleFixture(_))));
        let mut spec = FixtureSpec::ronaldo(1);
        spec.games_with_goal = 800;
        assert!(matches!(generate_fixture(&spec), Err(Error::InfeasibleFixture(_))));
    }
}
