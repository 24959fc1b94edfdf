//! One line per acceptance criterion; exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use aswkit::counting::Status;
use aswkit::verify::{run_criterion, VerifyConfig, CRITERIA};

fn main() -> ExitCode {
    let cfg = VerifyConfig::default();
    let mut failed = 0;
    for (i, name) in CRITERIA.iter().enumerate() {
        let k = i + 1;
        let start = Instant::now();
        let records = run_criterion(k, &cfg);
        let elapsed = start.elapsed();
        let count = |s: Status| records.iter().filter(|r| r.status() == s).count();
        let (pass, fail, skip) = (count(Status::Pass), count(Status::Fail), count(Status::Skipped));
        let ok = fail == 0 && skip == 0 && !records.is_empty();
        println!(
            "criterion {k:>2} {:<4} {name}: {} records, {pass} pass, {fail} fail, {skip} skipped, {:.2}s",
            if ok { "PASS" } else { "FAIL" },
            records.len(),
            elapsed.as_secs_f64()
        );
        for r in records.iter().filter(|r| r.status() != Status::Pass) {
            println!(
                "    {} {:?}: formula {:?} oracle {:?} checks {:?} {}",
                r.check_id,
                r.status(),
                r.formula_value,
                r.oracle_value,
                r.identity_checks,
                r.note.as_deref().unwrap_or("")
            );
        }
        if !ok {
            failed += 1;
        }
    }
    if failed == 0 {
        println!("acceptance: all {} criteria pass", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria fail");
        ExitCode::FAILURE
    }
}
