//! Sample-size and effective-sample-complexity estimates.

use serde::{Deserialize, Serialize};

use crate::bounds::report::{flag, ln_clamped, BoundReport};
use crate::bounds::FatFn;
use crate::core::BoundParams;
use crate::error::{param_err, precondition, Result};

/// Which entropy route backs the sample-size estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleSizeVariant {
    /// Via the sup-metric decomposition and the sample-size-dependent
    /// combinatorial bound; constant K1.
    Alon,
    /// Via the margin-class entropy bound; constant K2 with an extra
    /// ln(1/eps) factor. K1 < K2 whenever both are set away from defaults.
    Cor2,
}

impl SampleSizeVariant {
    pub fn cli_token(self) -> &'static str {
        match self {
            SampleSizeVariant::Alon => "alon",
            SampleSizeVariant::Cor2 => "cor2",
        }
    }
}

fn check_eps_delta_gamma(params: &BoundParams) -> Result<()> {
    if !(params.epsilon > 0.0 && params.epsilon < 1.0) {
        return param_err(
            "epsilon",
            format!("must lie in (0, 1), got {}", params.epsilon),
        );
    }
    Ok(()) // gamma, delta already validated by params.validate()
}

/// Sample size sufficient for the uniform deviation to stay below epsilon
/// with probability 1 - delta. With F = (A sqrt(VKd) / (eps gamma))^d and
/// L = ln(C M^2 F / (eps^2 gamma^2)):
///
/// ```text
/// alon:  ceil( (1/eps^2) (K1 C F L^2           + ln(2/delta)) )
/// cor2:  ceil( (1/eps^2) (K2 C F L^2 ln(1/eps) + ln(2/delta)) )
/// ```
///
/// The theory requires 0 < K1 < K2; since both default to 1.0, the shared
/// default pair is exempt from the strictness check.
pub fn sample_size(variant: SampleSizeVariant, params: &BoundParams) -> Result<BoundReport> {
    params.validate()?;
    check_eps_delta_gamma(params)?;
    if params.k1 >= params.k2 && !(params.k1 == 1.0 && params.k2 == 1.0) {
        return param_err(
            "k1",
            format!("K1 < K2 required, got K1 = {}, K2 = {}", params.k1, params.k2),
        );
    }
    let eps = params.epsilon;
    let gamma = params.gamma;
    let cf = params.c as f64;
    let f = (params.a * (params.v * params.k * params.d as f64).sqrt() / (eps * gamma))
        .powi(params.d as i32);
    let (l, clamped) = ln_clamped(cf * params.m * params.m * f / (eps * eps * gamma * gamma));
    let lead = match variant {
        SampleSizeVariant::Alon => params.k1 * cf * f * l * l,
        SampleSizeVariant::Cor2 => params.k2 * cf * f * l * l * (1.0 / eps).ln(),
    };
    let raw = (lead + (2.0 / params.delta).ln()) / (eps * eps);
    let value = raw.ceil();
    Ok(BoundReport::new(variant.cli_token(), value)
        .with_flag_if(clamped, flag::VACUOUS)
        .with_diagnostic("raw", raw)
        .with_diagnostic("fat_surrogate_f", f)
        .with_diagnostic("squared_log", l * l))
}

/// How the mixing coefficients decay, with the block length a_n implied by
/// balancing 2 b_n beta(a_n) against K1 exp(-K2 b_n).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum MixingKind {
    /// beta(a) = beta0 a^-k: a_n = (beta0 exp(K2 b_n) / K1)^(1/k).
    Algebraic { beta0: f64, k: f64 },
    /// beta(a) = beta0 exp(-beta a^k'): a_n = ((K2 b_n + ln(beta0/K1)) / beta)^(1/k').
    Exponential { beta0: f64, beta: f64, k_prime: f64 },
}

/// Effective sample complexity for mixing processes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EffectiveComplexity {
    /// Required number of block pairs, already ceiled; may be +infinity.
    pub b_n: f64,
    /// Block length from the kind-specific balance at that b_n; +infinity
    /// when the balance overflows (reported, never saturated silently).
    /// Real-valued by construction; experiments needing an integer block
    /// length should floor it. Flooring shortens blocks, which can only
    /// increase beta(a_n), so a bound evaluated at the floored length
    /// remains valid; the slack is the fractional block dropped.
    pub a_n: f64,
    pub flags: Vec<String>,
    pub diagnostics: std::collections::BTreeMap<String, f64>,
}

impl EffectiveComplexity {
    pub fn b_n_int(&self) -> Option<u64> {
        (self.b_n.is_finite() && self.b_n >= 0.0 && self.b_n <= u64::MAX as f64)
            .then_some(self.b_n as u64)
    }
}

/// Number of (near-)independent blocks sufficient for the mixing-case tail
/// to stay below delta. With F the fat surrogate at scale eps gamma / 6144:
///
/// ```text
/// b_n = ceil( (1 / min{eps^2/32, K2}) (C K3 F ln^2(C M^2 F / (eps^2 gamma^2)) ln(1/eps)
///              + ln((4 + K1)/delta)) )
/// ```
///
/// and a_n follows from the kind-specific balancing formula evaluated at
/// that b_n.
pub fn effective_sample_complexity(
    kind: MixingKind,
    params: &BoundParams,
    fat: &FatFn,
) -> Result<EffectiveComplexity> {
    params.validate()?;
    check_eps_delta_gamma(params)?;
    match kind {
        MixingKind::Algebraic { beta0, k } => {
            if !(beta0 > 0.0 && k > 0.0) {
                return param_err("kind", "algebraic mixing needs positive beta0 and k");
            }
        }
        MixingKind::Exponential { beta0, beta, k_prime } => {
            if !(beta0 > 0.0 && beta > 0.0 && k_prime > 0.0) {
                return param_err("kind", "exponential mixing needs positive parameters");
            }
        }
    }
    let eps = params.epsilon;
    let gamma = params.gamma;
    let cf = params.c as f64;
    let scale = eps * gamma / 6144.0;
    let f = fat.eval(scale);
    if !(f >= 0.0) {
        return param_err("fat", format!("surrogate must be nonnegative, got {f}"));
    }
    let (l, clamped) = ln_clamped(cf * params.m * params.m * f / (eps * eps * gamma * gamma));
    let denom = (eps * eps / 32.0).min(params.k2);
    let inner = cf * params.k3 * f * l * l * (1.0 / eps).ln()
        + ((4.0 + params.k1) / params.delta).ln();
    let b_n = (inner / denom).ceil();

    let mut flags: Vec<String> = Vec::new();
    if clamped {
        flags.push(flag::VACUOUS.to_string());
    }
    let a_n = match kind {
        MixingKind::Algebraic { beta0, k } => {
            (beta0 * (params.k2 * b_n).exp() / params.k1).powf(1.0 / k)
        }
        MixingKind::Exponential { beta0, beta, k_prime } => {
            let numerator = params.k2 * b_n + (beta0 / params.k1).ln();
            if numerator < 0.0 {
                return precondition(format!(
                    "K2 b_n + ln(beta0/K1) >= 0 required (got {numerator})"
                ));
            }
            (numerator / beta).powf(1.0 / k_prime)
        }
    };
    if a_n.is_infinite() || b_n.is_infinite() {
        flags.push(flag::OVERFLOW.to_string());
    }
    let mut diagnostics = std::collections::BTreeMap::new();
    diagnostics.insert("fat_surrogate_f".to_string(), f);
    diagnostics.insert("fat_scale".to_string(), scale);
    diagnostics.insert("squared_log".to_string(), l * l);
    diagnostics.insert("denominator".to_string(), denom);
    Ok(EffectiveComplexity {
        b_n,
        a_n,
        flags,
        diagnostics,
    })
}
