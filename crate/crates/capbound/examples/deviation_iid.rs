//! Monte Carlo check of the uniform-deviation tail bound on independent
//! samples: draw many fresh samples, record how often the worst gap between
//! margin risk and empirical margin risk over a finite class list exceeds
//! epsilon, and compare against the closed-form bounds.
//!
//! Run with: cargo run --release --example deviation_iid

use capbound::core::{random_tuples, DistributionSpec};
use capbound::experiments::deviation_experiment;

fn main() -> capbound::Result<()> {
    let classes = random_tuples(8, 3, 1, 1.0, 8, 1.0, 2.0, 7)?;
    let dist = DistributionSpec::uniform(1, 1.0, 8, 3)?;
    let (n, eps, gamma, trials) = (512, 0.15, 0.5, 400);

    let report = deviation_experiment(&classes, &dist, n, eps, gamma, trials, 99)?;
    println!(
        "{} class tuples, n = {n}, eps = {eps}, gamma = {gamma}, {trials} trials",
        report.class_count
    );
    println!("exact risks: {:?}", report.exact_risks.iter().map(|r| (r * 1000.0).round() / 1000.0).collect::<Vec<_>>());
    println!();
    println!("observed exceedance frequency  p_hat = {} (se {:.5})", report.p_hat, report.std_error);
    println!("finite-class union baseline          = {:.3e}", report.baseline_union_hoeffding);
    println!(
        "tail bound, measured entropy (N = {})  = {:.4} {:?}",
        report.covering_number, report.bound_empirical_entropy.value, report.bound_empirical_entropy.flags
    );
    println!(
        "tail bound, margin-class entropy       = {:.4e} {:?}",
        report.bound_margin_entropy.value, report.bound_margin_entropy.flags
    );
    let max_dev = report
        .sup_deviations
        .iter()
        .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    println!("largest observed sup deviation         = {max_dev:.4}");
    Ok(())
}
