//! Minute-by-minute superiority points between two players.

use goal_reliability::{generate_fixture, minute_histogram, points_comparison, FixtureSpec};

fn main() -> goal_reliability::Result<()> {
    let a = generate_fixture(&FixtureSpec::ronaldo(1))?;
    let b = generate_fixture(&FixtureSpec::messi(2))?;
    let (ha, hb) = (minute_histogram(&a), minute_histogram(&b));
    let table = points_comparison(&ha, &hb);

    println!(
        "{:<8} {:>8} {:>8} {:>6}",
        "minutes", a.player_name, b.player_name, "draw"
    );
    for s in &table.segments {
        println!("{:<8} {:>8} {:>8} {:>6}", s.label, s.points_a, s.points_b, s.draws);
    }
    println!(
        "{:<8} {:>8} {:>8} {:>6}",
        "total", table.points_a_total, table.points_b_total, table.draws_total
    );
    // fixture minutes stop at 90, so the added-time segment is all draws
    Ok(())
}
