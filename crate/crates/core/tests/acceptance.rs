//! Acceptance criteria 1-8, one PASS/FAIL line each. Runs without the test
//! harness so the lines are never captured.

use std::process::ExitCode;

use graphene_landau::validate::run_criterion;

fn main() -> ExitCode {
    let reports: Vec<_> = (1..=8).map(run_criterion).collect();
    for r in &reports {
        println!("{}", r.summary_line());
        if let Some(e) = &r.error {
            println!("    error: {e}");
        }
        for c in r.failures() {
            println!("    {}: {:e} (limit {:e})", c.label, c.value, c.limit);
        }
    }
    let failed: Vec<u8> = reports.iter().filter(|r| !r.passed()).map(|r| r.id).collect();
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
