//! Metric entropy bounds: combinatorial bounds through the fat-shattering
//! dimension, the dedicated BV-class bound, and the class-count
//! decompositions that expose the dependency on C.

use crate::bounds::report::{flag, ln_clamped, log_clamped, BoundReport};
use crate::bounds::{EntropyFn, FatFn, LogBase};
use crate::core::BoundParams;
use crate::error::{param_err, precondition, Result};

use std::f64::consts::E;

/// Mendelson-Vershynin combinatorial bound in the empirical L2 metric:
/// ln N(eps) <= 20 d_F(eps/96) ln(7 M / eps). Dimension-free (no sample
/// size); clamped at 0 when 7M < eps.
pub fn mv_entropy(m: f64, eps: f64, fat: &FatFn) -> Result<BoundReport> {
    if !(m > 0.0) {
        return param_err("m", format!("must be positive, got {m}"));
    }
    if !(eps > 0.0) {
        return param_err("eps", format!("must be positive, got {eps}"));
    }
    let fat_value = fat.eval(eps / 96.0);
    let (log_factor, clamped) = ln_clamped(7.0 * m / eps);
    let value = 20.0 * fat_value * log_factor;
    Ok(BoundReport::new("mv", value)
        .with_flag_if(clamped, flag::VACUOUS)
        .with_diagnostic("fat_value", fat_value)
        .with_diagnostic("log_factor", log_factor))
}

/// Alon et al. combinatorial bound in the empirical sup metric, which does
/// depend on the sample size n:
///
/// ```text
/// ln N(eps) <= d_F(eps/4) log2(2 M e n / (d_F(eps/4) eps)) ln(16 M^2 n / eps^2)
/// ```
///
/// Requires d_F(eps/4) >= 1; smaller surrogates flag the report.
pub fn alon_entropy(m: f64, n: u64, eps: f64, fat: &FatFn) -> Result<BoundReport> {
    if !(m > 0.0) {
        return param_err("m", format!("must be positive, got {m}"));
    }
    if n == 0 {
        return param_err("n", "must be >= 1");
    }
    if !(eps > 0.0) {
        return param_err("eps", format!("must be positive, got {eps}"));
    }
    let fat_value = fat.eval(eps / 4.0);
    if fat_value <= 0.0 {
        return Ok(BoundReport::new("alon", 0.0)
            .with_flag(flag::FAT_ZERO)
            .with_flag(flag::VACUOUS)
            .with_diagnostic("fat_value", fat_value));
    }
    let nf = n as f64;
    let (log2_factor, c1) = log_clamped(LogBase::Two, 2.0 * m * E * nf / (fat_value * eps));
    let (ln_factor, c2) = ln_clamped(16.0 * m * m * nf / (eps * eps));
    let value = fat_value * log2_factor * ln_factor;
    Ok(BoundReport::new("alon", value)
        .with_flag_if(fat_value < 1.0, flag::FAT_BELOW_ONE)
        .with_flag_if(c1 || c2, flag::VACUOUS)
        .with_diagnostic("fat_value", fat_value)
        .with_diagnostic("log2_factor", log2_factor)
        .with_diagnostic("ln_factor", ln_factor))
}

/// Decomposition of the composite-class entropy into C copies of a
/// component entropy at scale eps / C^(1/p); for p = infinity the scale
/// stays eps and the dependency on C inside the scale vanishes.
pub fn decompose_entropy(
    c: usize,
    p: f64,
    eps: f64,
    component: &EntropyFn,
    n: u64,
) -> Result<f64> {
    if c == 0 {
        return param_err("c", "must be >= 1");
    }
    if p.is_nan() || p < 1.0 {
        return param_err("p", format!("must satisfy p >= 1, got {p}"));
    }
    if !(eps > 0.0) {
        return param_err("eps", format!("must be positive, got {eps}"));
    }
    let scale = if p.is_infinite() {
        eps
    } else {
        eps / (c as f64).powf(1.0 / p)
    };
    Ok(c as f64 * component.eval(scale, n))
}

/// Entropy bound via the L_p-norm decomposition (2 < p < infinity) applied
/// to BV component classes:
///
/// ```text
/// ln N(eps) <= 2 C log2^d(2C) (60 A sqrt(VKd)/eps)^d ln(30 e n log2(2C) M / eps)
/// ```
pub fn lp_entropy_bound(params: &BoundParams, eps: f64, n: u64) -> Result<BoundReport> {
    params.validate()?;
    if !(eps > 0.0) {
        return param_err("eps", format!("must be positive, got {eps}"));
    }
    if n == 0 {
        return param_err("n", "must be >= 1");
    }
    let cf = params.c as f64;
    let l2c = (2.0 * cf).log2();
    let power = (60.0 * params.a * (params.v * params.k * params.d as f64).sqrt() / eps)
        .powi(params.d as i32);
    let (log_factor, clamped) = ln_clamped(30.0 * E * n as f64 * l2c * params.m / eps);
    let value = 2.0 * cf * l2c.powi(params.d as i32) * power * log_factor;
    Ok(BoundReport::new("musl", value)
        .with_flag_if(clamped, flag::VACUOUS)
        .with_diagnostic("log2_2c", l2c)
        .with_diagnostic("power_factor", power)
        .with_diagnostic("log_factor", log_factor))
}

/// Which side of the L1 entropy bound for BV classes to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DuttaVariant {
    /// ln N against L1(P) for densities bounded by K_P: (1/eps)^d scaling.
    #[default]
    Continuous,
    /// Empirical-metric transfer of the same bound: (2/eps)^d scaling.
    Empirical,
}

/// The dedicated L1 entropy bound for BV classes, with explicit constants:
///
/// ```text
/// ln N(eps) <= K M (sqrt(d) A V K_P)^d / (d K_P^2) * (x/eps)^d
/// ```
///
/// with x = 1 (continuous) or x = 2 (empirical), for eps in (0, M].
pub fn dutta_entropy(params: &BoundParams, eps: f64, variant: DuttaVariant) -> Result<f64> {
    params.validate()?;
    if !(eps > 0.0 && eps <= params.m) {
        return precondition(format!(
            "eps in (0, M] required (eps = {eps}, M = {})",
            params.m
        ));
    }
    let d = params.d as f64;
    let base = ((params.d as f64).sqrt() * params.a * params.v * params.k_p).powi(params.d as i32);
    let lead = params.k * params.m * base / (d * params.k_p * params.k_p);
    let x = match variant {
        DuttaVariant::Continuous => 1.0,
        DuttaVariant::Empirical => 2.0,
    };
    Ok(lead * (x / eps).powi(params.d as i32))
}

/// Entropy of the composite margin class in the empirical L2 metric,
/// obtained by decomposing the fat-shattering dimension first:
///
/// ```text
/// ln N(eps) <= 640 C d_0(eps/384) log^2(256 C M^2 d_0(eps/384) / eps^2) ln(7 gamma / eps)
/// ```
///
/// for eps in (0, gamma]. The squared log is natural by default (the form
/// the corollary is displayed in); override with `LogBase::Two`.
pub fn margin_entropy_bound(
    c: usize,
    eps: f64,
    gamma: f64,
    m: f64,
    fat: &FatFn,
    base: LogBase,
) -> Result<BoundReport> {
    if c == 0 {
        return param_err("c", "must be >= 1");
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return param_err("gamma", format!("must lie in (0, 1], got {gamma}"));
    }
    if !(eps > 0.0 && eps <= gamma) {
        return precondition(format!(
            "eps in (0, gamma] required (eps = {eps}, gamma = {gamma})"
        ));
    }
    if !(m > 0.0) {
        return param_err("m", format!("must be positive, got {m}"));
    }
    let cf = c as f64;
    let fat_value = fat.eval(eps / 384.0);
    let arg = 256.0 * cf * m * m * fat_value / (eps * eps);
    let (sq_log, clamped) = log_clamped(base, arg);
    // 7 gamma / eps >= 7 under the precondition, never clamps.
    let tail_log = (7.0 * gamma / eps).ln();
    let value = 640.0 * cf * fat_value * sq_log * sq_log * tail_log;
    Ok(BoundReport::new("cor2", value)
        .with_flag_if(fat_value < 1.0, flag::FAT_BELOW_ONE)
        .with_flag_if(clamped, flag::VACUOUS)
        .with_diagnostic("fat_value", fat_value)
        .with_diagnostic("log_argument", arg)
        .with_diagnostic("tail_log", tail_log))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mv_spot_values() {
        let fat = FatFn::constant(1.0);
        // eps = 7M zeroes the log
        let r = mv_entropy(1.0, 7.0, &fat).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(!r.has_flag(flag::VACUOUS));
        // 20 ln 10
        let r = mv_entropy(1.0, 0.7, &fat).unwrap();
        assert!((r.value - 46.051701859880914).abs() < 1e-9);
        // linear in the fat value
        let r2 = mv_entropy(1.0, 0.7, &FatFn::constant(2.0)).unwrap();
        assert!((r2.value - 2.0 * r.value).abs() < 1e-9);
        // past 7M: clamped and flagged
        let r = mv_entropy(1.0, 8.0, &fat).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.has_flag(flag::VACUOUS));
    }

    #[test]
    fn alon_spot_values() {
        let fat = FatFn::constant(1.0);
        // log2(4e) ln(32)
        let r = alon_entropy(1.0, 2, 1.0, &fat).unwrap();
        assert!((r.value - 11.931471805599453).abs() < 1e-9);
        // log2(e) ln(4) = 2 exactly in the reals
        let r = alon_entropy(1.0, 1, 2.0, &fat).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn alon_strictly_increasing_in_n() {
        let fat = FatFn::constant(1.0);
        let mut prev = 0.0;
        for n in [1u64, 2, 4, 8, 64, 1024] {
            let v = alon_entropy(1.0, n, 1.0, &fat).unwrap().value;
            assert!(v > prev, "n = {n}");
            prev = v;
        }
    }

    #[test]
    fn alon_flags_out_of_regime_fat() {
        let r = alon_entropy(1.0, 4, 1.0, &FatFn::constant(0.5)).unwrap();
        assert!(r.has_flag(flag::FAT_BELOW_ONE));
        let r = alon_entropy(1.0, 4, 1.0, &FatFn::constant(0.0)).unwrap();
        assert!(r.has_flag(flag::FAT_ZERO));
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn decompose_identity_at_c_one() {
        let component = EntropyFn::new(|s, n| 3.0 / s + n as f64);
        for p in [1.0, 2.0, 3.0, f64::INFINITY] {
            let v = decompose_entropy(1, p, 0.25, &component, 7).unwrap();
            assert_eq!(v, component.eval(0.25, 7));
        }
    }

    #[test]
    fn decompose_scales_by_c_root() {
        let component = EntropyFn::new(|s, _| 1.0 / s);
        // p = 1, C = 4: scale eps/4, value 4 * component(eps/4)
        let v = decompose_entropy(4, 1.0, 0.5, &component, 1).unwrap();
        assert!((v - 4.0 / 0.125).abs() < 1e-12);
        // p = inf: the scale stays eps for any C
        let v = decompose_entropy(16, f64::INFINITY, 0.5, &component, 1).unwrap();
        assert!((v - 16.0 / 0.5).abs() < 1e-12);
    }

    #[test]
    fn lp_entropy_spot_value() {
        // C=1 reduces to 2 (60 A sqrt(VKd)/eps)^d ln(30 e n M / eps);
        // with everything 1 and eps = 60, n = 1: 2 ln(e/2).
        let params = BoundParams {
            epsilon: 60.0,
            ..BoundParams::default()
        };
        let r = lp_entropy_bound(&params, 60.0, 1).unwrap();
        assert!((r.value - 0.6137056388801094).abs() < 1e-12);
    }

    #[test]
    fn lp_entropy_grows_with_c() {
        let mut prev = 0.0;
        for c in [1usize, 2, 4, 8] {
            let params = BoundParams {
                c,
                ..BoundParams::default()
            };
            let v = lp_entropy_bound(&params, 0.5, 16).unwrap().value;
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn dutta_spot_values() {
        let p = BoundParams::default();
        assert_eq!(dutta_entropy(&p, 1.0, DuttaVariant::Continuous).unwrap(), 1.0);
        // empirical / continuous ratio is 2^d
        for d in [1usize, 2, 3] {
            let p = BoundParams {
                d,
                ..BoundParams::default()
            };
            let cont = dutta_entropy(&p, 0.5, DuttaVariant::Continuous).unwrap();
            let emp = dutta_entropy(&p, 0.5, DuttaVariant::Empirical).unwrap();
            assert!((emp / cont - 2f64.powi(d as i32)).abs() < 1e-12);
        }
        // d=2, rest 1, eps=0.5: (sqrt(2))^2/2 * 4 = 4
        let p = BoundParams {
            d: 2,
            ..BoundParams::default()
        };
        assert!((dutta_entropy(&p, 0.5, DuttaVariant::Continuous).unwrap() - 4.0).abs() < 1e-12);
        assert!(dutta_entropy(&p, 1.5, DuttaVariant::Continuous).is_err());
    }

    #[test]
    fn margin_entropy_spot_value() {
        let fat = FatFn::constant(1.0);
        // C=1, M=1, gamma=1, eps=0.5: 640 ln^2(1024) ln(14)
        let r = margin_entropy_bound(1, 0.5, 1.0, 1.0, &fat, LogBase::E).unwrap();
        assert!((r.value - 81148.355066660565).abs() < 1e-6);
        // boundary eps = gamma keeps the last factor at ln 7
        let r = margin_entropy_bound(1, 1.0, 1.0, 1.0, &fat, LogBase::E).unwrap();
        assert!((r.diagnostics["tail_log"] - 7f64.ln()).abs() < 1e-12);
        // eps above gamma violates the precondition
        assert!(margin_entropy_bound(1, 1.5, 1.0, 1.0, &fat, LogBase::E).is_err());
    }

    #[test]
    fn entropy_bounds_are_nonincreasing_in_scale() {
        let params = BoundParams {
            v: 2.0,
            d: 2,
            c: 3,
            ..BoundParams::default()
        };
        let fat = FatFn::bv(&params).unwrap();
        let scales: Vec<f64> = (1..=20).map(|i| i as f64 * 0.05).collect();
        let mv = EntropyFn::new({
            let fat = fat.clone();
            move |s, _| mv_entropy(1.0, s, &fat).map(|r| r.value).unwrap_or(0.0)
        });
        mv.check_shape(&scales, 8).unwrap();
        let cor2 = EntropyFn::new({
            let fat = fat.clone();
            move |s, _| {
                margin_entropy_bound(3, s, 1.0, 1.0, &fat, LogBase::E)
                    .map(|r| r.value)
                    .unwrap_or(0.0)
            }
        });
        cor2.check_shape(&scales, 8).unwrap();
    }
}
