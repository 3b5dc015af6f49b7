//! Fat-shattering dimension bounds and their class-count decompositions.

use crate::bounds::report::{flag, ln_clamped, log_clamped, BoundReport};
use crate::bounds::{FatFn, LogBase};
use crate::core::BoundParams;
use crate::error::{param_err, precondition, Result};

/// Fat-shattering bound for classes of bounded-variation functions on
/// [0, A]^d with range [0, M] and variation at most V:
///
/// ```text
/// d_F(eps) <= (1 + A sqrt(V K d) / eps)^d,   eps in (0, M]
/// ```
///
/// K is the unknown absolute constant of the bound, default 1.
pub fn bv_fat_bound(params: &BoundParams, eps: f64) -> Result<f64> {
    params.validate()?;
    if !(eps > 0.0 && eps <= params.m) {
        return precondition(format!(
            "eps in (0, M] required (eps = {eps}, M = {})",
            params.m
        ));
    }
    let coeff = (params.v * params.k * params.d as f64).sqrt();
    Ok((1.0 + params.a * coeff / eps).powi(params.d as i32))
}

/// Decomposition of the composite-class fat dimension via component classes
/// at a C-dependent scale:
///
/// ```text
/// d(eps) <= 462 C d_0(eps / (96 sqrt(C))) ln(24 M_G sqrt(C) / eps)
/// ```
///
/// Clamped to 0 (and flagged) when the log factor goes negative. `m_g` is
/// the range bound of the composite margin class, an explicit argument
/// because nothing pins it from the component data alone.
pub fn duan_fat_decomposition(
    c: usize,
    eps: f64,
    m_g: f64,
    fat: &FatFn,
) -> Result<BoundReport> {
    if c == 0 {
        return param_err("c", "must be >= 1");
    }
    if !(eps > 0.0) {
        return param_err("eps", format!("must be positive, got {eps}"));
    }
    if !(m_g > 0.0) {
        return param_err("m_g", format!("must be positive, got {m_g}"));
    }
    let cf = c as f64;
    let scale = eps / (96.0 * cf.sqrt());
    let fat_value = fat.eval(scale);
    let (log_factor, clamped) = ln_clamped(24.0 * m_g * cf.sqrt() / eps);
    let value = 462.0 * cf * fat_value * log_factor;
    Ok(BoundReport::new("duan", value)
        .with_flag_if(clamped, flag::VACUOUS)
        .with_diagnostic("fat_scale", scale)
        .with_diagnostic("fat_value", fat_value)
        .with_diagnostic("log_factor", log_factor))
}

/// Decomposition of the composite-class fat dimension through the
/// uniform-metric entropy, with a scale free of C:
///
/// ```text
/// d(eps) <= 32 C d_0(eps/4) log^2(256 C M^2 d_0(eps/4) / eps^2)
/// ```
///
/// The squared log defaults to base 2 (the base the derivation uses);
/// pass `LogBase::E` to override. Requires d_0(eps/4) >= 1 to be a valid
/// bound; smaller surrogates are flagged, not rejected.
pub fn fat_decomposition(
    c: usize,
    eps: f64,
    m: f64,
    fat: &FatFn,
    base: LogBase,
) -> Result<BoundReport> {
    if c == 0 {
        return param_err("c", "must be >= 1");
    }
    if !(eps > 0.0) {
        return param_err("eps", format!("must be positive, got {eps}"));
    }
    if !(m > 0.0) {
        return param_err("m", format!("must be positive, got {m}"));
    }
    let cf = c as f64;
    let fat_value = fat.eval(eps / 4.0);
    let arg = 256.0 * cf * m * m * fat_value / (eps * eps);
    let (log_factor, clamped) = log_clamped(base, arg);
    let value = 32.0 * cf * fat_value * log_factor * log_factor;
    Ok(BoundReport::new("thm3", value)
        .with_flag_if(fat_value < 1.0, flag::FAT_BELOW_ONE)
        .with_flag_if(clamped, flag::VACUOUS)
        .with_diagnostic("fat_value", fat_value)
        .with_diagnostic("log_argument", arg))
}

/// Fat bound routed through a Rademacher complexity envelope C K_F / sqrt(n):
/// d_F(eps) <= C^2 K_F^2 / eps^2. Quadratic in C, which is what the direct
/// decomposition above improves on.
pub fn rad_fat_bound(c: usize, k_f: f64, eps: f64) -> Result<f64> {
    if c == 0 {
        return param_err("c", "must be >= 1");
    }
    if !(k_f > 0.0) {
        return param_err("k_f", format!("must be positive, got {k_f}"));
    }
    if !(eps > 0.0) {
        return param_err("eps", format!("must be positive, got {eps}"));
    }
    let cf = c as f64;
    Ok(cf * cf * k_f * k_f / (eps * eps))
}
