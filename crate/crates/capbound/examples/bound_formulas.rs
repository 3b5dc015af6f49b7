//! Evaluate the closed-form capacity and entropy bounds at a desk-scale
//! parameter set, and sweep the BV fat-shattering bound over the scale.
//!
//! Run with: cargo run --example bound_formulas

use capbound::bounds::{
    alon_entropy, bv_fat_bound, duan_fat_decomposition, dutta_entropy, fat_decomposition,
    lp_entropy_bound, margin_entropy_bound, mv_entropy, rad_fat_bound, DuttaVariant, FatFn,
    LogBase,
};
use capbound::core::BoundParams;

fn main() -> capbound::Result<()> {
    let params = BoundParams {
        v: 2.0,
        d: 2,
        c: 4,
        gamma: 0.5,
        ..BoundParams::default()
    };
    let eps = 0.25;
    let fat = FatFn::bv(&params)?;

    println!("parameters: A={} M={} V={} d={} C={} gamma={} (all constants 1)", params.a, params.m, params.v, params.d, params.c, params.gamma);
    println!();
    println!("fat-shattering dimension surrogates at eps = {eps}");
    println!("  BV bound               : {:>14.2}", bv_fat_bound(&params, eps)?);
    println!(
        "  Duan decomposition     : {:>14.2}",
        duan_fat_decomposition(params.c, eps, params.m / 2.0, &fat)?.value
    );
    println!(
        "  entropy decomposition  : {:>14.2}",
        fat_decomposition(params.c, eps, params.m, &fat, LogBase::Two)?.value
    );
    println!(
        "  Rademacher route       : {:>14.2}",
        rad_fat_bound(params.c, params.k_f, eps)?
    );
    println!();
    println!("metric entropy bounds at eps = {eps} (n = 4096 where it matters)");
    println!("  Mendelson-Vershynin    : {:>14.2}", mv_entropy(params.m, eps, &fat)?.value);
    println!(
        "  Alon et al. (sup norm) : {:>14.2}",
        alon_entropy(params.m, 4096, eps, &fat)?.value
    );
    println!(
        "  L_p decomposition      : {:>14.2}",
        lp_entropy_bound(&params, eps, 4096)?.value
    );
    println!(
        "  dedicated L1 (BV)      : {:>14.2}",
        dutta_entropy(&params, eps, DuttaVariant::Empirical)?
    );
    println!(
        "  margin-class (L2)      : {:>14.2}",
        margin_entropy_bound(params.c, eps, params.gamma, params.m, &fat, LogBase::E)?.value
    );
    println!();
    println!("BV fat bound over a scale sweep (non-increasing):");
    for i in 1..=8 {
        let scale = i as f64 / 8.0;
        println!("  eps = {scale:>5.3}  ->  {:>12.2}", bv_fat_bound(&params, scale)?);
    }
    Ok(())
}
