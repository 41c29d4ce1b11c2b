//! Runs without the libtest harness so the per-criterion lines always reach stdout.

use singtaut::corpus::{run_criterion, CRITERIA};
use std::process::ExitCode;

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for id in 1..=CRITERIA {
        let r = run_criterion(id);
        let budget = r.budget_millis.map_or(String::new(), |b| format!(" (budget {b} ms)"));
        println!(
            "criterion {}: {} [{}] {} ms{} - {}",
            r.id,
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.millis,
            budget,
            r.detail
        );
        if !r.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
