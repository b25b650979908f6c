//! Forward-search SWAP-test attack under both scoring rules, plus the
//! single-use constraint.

use qpke::attacks::{
    run_forward_search, single_use_constraint_check, AttackConfig, DecisionRule,
};
use qpke::rng::seeded;

fn main() -> qpke::Result<()> {
    for alpha in 1..=4 {
        for rule in [DecisionRule::IdentifyAll, DecisionRule::ParityAware] {
            let r = run_forward_search(&AttackConfig::forward_search(alpha, rule, 50_000, 11))?;
            println!(
                "alpha = {alpha} {:<12} success {:.4} ± {:.4} (theory {:.4})",
                rule.name(),
                r.success_rate,
                r.stderr,
                r.theory
            );
        }
    }
    let record = single_use_constraint_check(20_000, &mut seeded(5))?;
    for c in &record.cases {
        println!(
            "{:<18} first {:.4}, second | pass {:?}, second | fail {:?}",
            c.label, c.first_pass_rate, c.second_pass_given_pass, c.second_pass_given_fail
        );
    }
    Ok(())
}
