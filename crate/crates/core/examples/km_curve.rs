//! Product-limit curve with Greenwood bands for a handful of records.
//!
//! `cargo run --example km_curve`

use goal_reliability::km::Z_95_ROUNDED;
use goal_reliability::{ci_bounds, fit_km, KmInput};

fn main() -> goal_reliability::Result<()> {
    // minutes to a goal; `false` marks a goalless game of that length
    let durations = vec![12.0, 23.0, 23.0, 31.0, 45.0, 58.0, 67.0, 90.0, 90.0, 90.0];
    let events = vec![true, true, false, true, true, false, true, false, false, true];
    let curve = fit_km(&KmInput::new(durations, events)?, 0.95)?;

    println!(
        "{:>6} {:>6} {:>6} {:>9} {:>8} {:>8}",
        "time", "n_risk", "events", "R(t)", "lower", "upper"
    );
    for j in 0..curve.len() {
        println!(
            "{:>6} {:>6} {:>6} {:>9.4} {:>8.4} {:>8.4}",
            curve.times[j], curve.n_risk[j], curve.n_event[j], curve.estimates[j], curve.ci_lower[j], curve.ci_upper[j]
        );
    }

    let p = curve.evaluate(50.0);
    println!(
        "\nR(50) = {:.4}, 95% band ({:.4}, {:.4})",
        p.estimate, p.ci_lower, p.ci_upper
    );

    // the band on its own, exact quantile vs the rounded 1.96
    let (lo, hi) = ci_bounds(2.0 / 3.0, 2.0 / 27.0, 0.95)?;
    let (rlo, rhi) = goal_reliability::km::ci_bounds_with_z(2.0 / 3.0, 2.0 / 27.0, Z_95_ROUNDED)?;
    println!("R=2/3, Var=2/27: ({lo:.4}, {hi:.4}); with z=1.96: ({rlo:.4}, {rhi:.4})");
    Ok(())
}
