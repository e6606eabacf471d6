//! Generates the two pinned fixtures and prints their descriptive tables.

use goal_reliability::{generate_fixture, summarize, validate_dataset, FixtureSpec, GoalMode};

fn main() -> goal_reliability::Result<()> {
    for spec in [FixtureSpec::ronaldo(1), FixtureSpec::messi(2)] {
        let ds = generate_fixture(&spec)?;
        assert!(validate_dataset(&ds).is_empty());
        let s = summarize(&ds)?;
        println!("== {} ==", s.player_name);
        println!("games played          {:>5}", s.games_played);
        println!(
            "censored              {:>5} {:>7.2}%",
            s.censored_count, s.censored_percentage
        );
        println!(
            "uncensored            {:>5} {:>7.2}%",
            s.uncensored_count, s.uncensored_percentage
        );
        println!("records               {:>5}", s.total_records);
        for m in GoalMode::ALL {
            println!(
                "{:<21} {:>5} {:>7.2}%",
                m.title(),
                s.mode_counts[&m],
                s.mode_percentages[&m]
            );
        }
        println!(
            "games with a goal     {:>5} {:>7.2}%",
            s.games_with_goal, s.games_with_goal_percentage
        );
        println!("goals per match       {:>5.2}\n", s.goals_per_match);
    }
    Ok(())
}
