//! Competing failure modes: per-mode curves with the other modes censored,
//! multiplied into one combined curve.

use goal_reliability::cfm::{any_goal_input, CfmConfig};
use goal_reliability::{fit_cfm, fit_km, generate_fixture, select_modes, FixtureSpec};

fn main() -> goal_reliability::Result<()> {
    let ds = generate_fixture(&FixtureSpec::messi(2))?;
    let cfg = CfmConfig::default();
    let modes = select_modes(&ds, &cfg)?;
    println!(
        "modes with at least {} goals: {}",
        cfg.min_events_per_mode,
        modes.iter().map(|m| m.name()).collect::<Vec<_>>().join(", ")
    );

    let cfm = fit_cfm(&ds, &cfg)?;
    let pooled = fit_km(&any_goal_input(&ds), 0.95)?;
    println!("\n{:>5} {:>10} {:>10} {:>10}", "min", "combined", "lower", "any goal");
    for t in [15.0, 30.0, 45.0, 60.0, 75.0, 90.0] {
        let p = cfm.combined.evaluate(t);
        println!(
            "{t:>5} {:>10.4} {:>10.4} {:>10.4}",
            p.estimate,
            p.ci_lower,
            pooled.estimate_at(t)
        );
    }
    for (mode, curve) in &cfm.per_mode {
        println!("{:<18} R(90) = {:.4}", mode.name(), curve.estimate_at(90.0));
    }
    Ok(())
}
