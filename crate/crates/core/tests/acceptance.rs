//! Runs every acceptance criterion once and prints one PASS/FAIL line each.
//! Built without the libtest harness so the lines are never captured.

use std::process::ExitCode;

use modalkit::suite::CRITERIA;

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for (id, _, check) in CRITERIA {
        let report = check(0);
        println!("{report} [{:.2}s]", report.elapsed.as_secs_f64());
        if !report.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: {} of {} criteria passed", CRITERIA.len(), CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
