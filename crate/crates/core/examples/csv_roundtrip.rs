//! Writes a dataset to the input CSV format, reads it back, and shows how a
//! bad row is reported.

use std::path::Path;

use goal_reliability::ingest::read_csv;
use goal_reliability::{write_csv, GoalMode, Observation, PlayerDataset};

fn main() -> goal_reliability::Result<()> {
    let ds = PlayerDataset::from_observations(
        "demo",
        vec![
            Observation::goal("M1", "2019-20", 17.0, GoalMode::HeadHeader),
            Observation::goal("M1", "2019-20", 64.0, GoalMode::PenaltyKick),
            Observation::goal("M2", "2019-20", 90.0, GoalMode::LeftFootedKick).with_label("90+3"),
            Observation::no_goal("M3", "2019-20", 78.0),
        ],
    );
    let mut buf = Vec::new();
    write_csv(&ds, &mut buf)?;
    print!("{}", String::from_utf8_lossy(&buf));

    let back = read_csv(buf.as_slice(), Path::new("demo.csv"), "demo", true)?;
    assert_eq!(back, ds);
    println!(
        "round trip ok: {} games, {} goals",
        back.games_played,
        back.uncensored_count()
    );

    let bad = "match_id,season,minute,censored,mode,raw_minute_label\nM1,2019-20,17,1,7,\n";
    match read_csv(bad.as_bytes(), Path::new("bad.csv"), "bad", true) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
