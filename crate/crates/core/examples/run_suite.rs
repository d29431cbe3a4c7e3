//! Runs a suite over the default grid and writes an NDJSON report.
//!
//! `cargo run --release --example run_suite -- [suite] [report path]`

use finite_w::verify::{default_grid, run_suite, Suite, VerificationPlan};

fn main() -> finite_w::Result<()> {
    let mut args = std::env::args().skip(1);
    let suite: Suite = args.next().as_deref().unwrap_or("all").parse()?;
    let mut plan = VerificationPlan::grid(&default_grid(), suite);
    plan.output = args.next().map(Into::into);
    let report = run_suite(&plan)?;
    for row in report.failures() {
        println!("FAIL {} {} {}", row.config, row.check, row.parameters);
    }
    println!(
        "{} rows, {} failed",
        report.summary.rows, report.summary.failed
    );
    Ok(())
}
