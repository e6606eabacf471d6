//! Two-sample log-rank test, first on a tiny hand-checkable example, then
//! per scoring mode on the fixtures.

use goal_reliability::cfm::CfmConfig;
use goal_reliability::report::{logrank_rows, LogRankRow};
use goal_reliability::{generate_fixture, log_rank, FixtureSpec, KmInput};

fn main() -> goal_reliability::Result<()> {
    let a = KmInput::new(vec![3.0, 5.0], vec![true, false])?;
    let b = KmInput::new(vec![3.0, 4.0], vec![true, true])?;
    let r = log_rank(&a, &b)?;
    println!(
        "hand example: O={} E={} V={:.4} chi2={:.4} p={:.4}",
        r.observed_a, r.expected_a, r.variance, r.chi_square, r.p_value
    );

    let ronaldo = generate_fixture(&FixtureSpec::ronaldo(1))?;
    let messi = generate_fixture(&FixtureSpec::messi(2))?;
    println!("\n{:<18} {:>9} {:>9}", "mode", "chi2", "p");
    for (mode, row) in logrank_rows(&ronaldo, &messi, &CfmConfig::default())? {
        match row {
            LogRankRow::Tested(r) => println!("{:<18} {:>9.4} {:>9.4}", mode.name(), r.chi_square, r.p_value),
            LogRankRow::InsufficientData { reason } => println!("{:<18} {reason}", mode.name()),
        }
    }
    Ok(())
}
