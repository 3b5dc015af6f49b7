//! Run the three capacity-lemma verification suites on random small
//! classes where every quantity is computed exactly. A failure would
//! falsify this crate's estimators, so each suite aborts on the first
//! counterexample.
//!
//! Run with: cargo run --example lemma_suites

use capbound::capacity::{lemma_checks, LemmaSuite};

fn main() -> capbound::Result<()> {
    for suite in [
        LemmaSuite::FatEntropy,
        LemmaSuite::RademacherFat,
        LemmaSuite::FiniteCounting,
    ] {
        let report = lemma_checks(suite, 42, 200)?;
        println!(
            "{:<16} cases = {:<4} passes = {:<4} failures = {} (vacuous premise: {})",
            report.suite, report.cases, report.passes, report.failures, report.vacuous
        );
    }
    println!("\nall suites passed");
    Ok(())
}
