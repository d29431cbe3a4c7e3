//! Corrupting a sign in the construction makes some suite fail.

use finite_w::verify::{default_grid, mutated, run_suite, PlanEntry, Suite, VerificationPlan};
use finite_w::Mutation;

fn main() -> finite_w::Result<()> {
    for m in Mutation::all() {
        let entries = default_grid()
            .into_iter()
            .flat_map(|c| {
                Suite::All
                    .expand()
                    .into_iter()
                    .map(move |s| PlanEntry::new(c, s))
            })
            .map(|e| e.with_options(mutated(m)))
            .collect();
        let report = run_suite(&VerificationPlan::new(entries))?;
        let first = report
            .failures()
            .next()
            .map(|r| format!("{} {}", r.config, r.check));
        println!(
            "{m}: {} failing rows, first {first:?}",
            report.summary.failed
        );
    }
    Ok(())
}
