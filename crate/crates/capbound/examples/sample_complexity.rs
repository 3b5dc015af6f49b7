//! Sample sizes sufficient for the uniform deviation to stay below epsilon
//! with confidence 1 - delta, as the number of classes grows, plus the
//! effective block complexity for mixing processes.
//!
//! Run with: cargo run --example sample_complexity

use capbound::bounds::{
    effective_sample_complexity, sample_size, FatFn, MixingKind, SampleSizeVariant,
};
use capbound::core::BoundParams;

fn main() -> capbound::Result<()> {
    println!("sample sizes at eps = 0.1, gamma = 0.5, delta = 0.01, d = 1, V = 2:");
    println!("{:>6} {:>16} {:>16}", "C", "via sup-metric", "via margin-class");
    for c in [2usize, 4, 8, 16, 32, 64] {
        let params = BoundParams {
            c,
            v: 2.0,
            epsilon: 0.1,
            gamma: 0.5,
            delta: 0.01,
            ..BoundParams::default()
        };
        let alon = sample_size(SampleSizeVariant::Alon, &params)?;
        let cor2 = sample_size(SampleSizeVariant::Cor2, &params)?;
        println!("{c:>6} {:>16.3e} {:>16.3e}", alon.value, cor2.value);
    }

    println!("\neffective block complexity (exponential mixing, beta0 = beta = k' = 1):");
    let params = BoundParams {
        c: 4,
        epsilon: 0.25,
        gamma: 0.5,
        delta: 0.05,
        ..BoundParams::default()
    };
    let fat = FatFn::bv(&BoundParams::default())?;
    let ec = effective_sample_complexity(
        MixingKind::Exponential {
            beta0: 1.0,
            beta: 1.0,
            k_prime: 1.0,
        },
        &params,
        &fat,
    )?;
    println!("  b_n = {:.3e} blocks of length a_n = {:.3e}", ec.b_n, ec.a_n);
    println!("  fat surrogate at the working scale: {}", ec.diagnostics["fat_surrogate_f"]);
    Ok(())
}
