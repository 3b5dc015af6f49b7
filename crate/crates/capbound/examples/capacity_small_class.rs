//! Estimate all four capacity measures of a small sampled class of
//! bounded-variation grid functions: covering and packing numbers at a few
//! scales, the fat-shattering dimension (exact and randomized), and the
//! Rademacher complexity (exact and Monte Carlo).
//!
//! Run with: cargo run --example capacity_small_class

use capbound::capacity::{
    exact_covering, fat_shattering_dimension, greedy_packing, rademacher_complexity,
    DistanceMatrix, FatMode, RademacherMode,
};
use capbound::core::{random_bv, FiniteFunctionClass};

fn main() -> capbound::Result<()> {
    // Ten BV functions on [0,1] with variation at most 2, evaluated on ten
    // random points.
    let functions: Vec<_> = (0..10)
        .map(|i| random_bv(1, 1.0, 16, 1.0, 2.0, i))
        .collect::<capbound::Result<_>>()?;
    let class = FiniteFunctionClass::from_grid_sample(&functions, 10, 42, "demo class")?;
    println!(
        "class: {} functions on {} points, range bound {}",
        class.len(),
        class.num_points(),
        class.range_bound()
    );

    println!("\ncovering / packing under the empirical L1 metric:");
    let matrix = DistanceMatrix::from_class(&class, 1.0)?;
    for eps in [0.05, 0.1, 0.2, 0.4] {
        let n_exact = exact_covering(&matrix, eps)?;
        let greedy = greedy_packing(&matrix, eps)?;
        println!(
            "  eps = {eps:>4}: N_exact = {n_exact}, greedy packing lower = {}, covering sandwich [{}, {}]",
            greedy.lower, greedy.diagnostics["covering_lower"], greedy.diagnostics["covering_upper"]
        );
    }

    println!("\nfat-shattering dimension:");
    for eps in [0.05, 0.1, 0.2, 0.4] {
        let exact = fat_shattering_dimension(&class, eps, FatMode::Exact)?;
        let randomized =
            fat_shattering_dimension(&class, eps, FatMode::Randomized { budget: 64, seed: 1 })?;
        println!(
            "  eps = {eps:>4}: exact = {}, randomized lower = {} (counting upper {})",
            exact.lower, randomized.lower, randomized.upper
        );
    }

    println!("\nRademacher complexity:");
    let exact = rademacher_complexity(&class, RademacherMode::Exact)?;
    let mc = rademacher_complexity(&class, RademacherMode::MonteCarlo { trials: 5000, seed: 2 })?;
    println!("  exact       = {:.6}", exact.lower);
    println!(
        "  monte carlo = {:.6} +- {:.6} ({} trials)",
        mc.diagnostics["mean"], mc.diagnostics["std_error"], mc.diagnostics["trials"]
    );
    Ok(())
}
