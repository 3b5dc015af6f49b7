//! Function handles threaded through the bound formulas.
//!
//! Wherever a formula consumes "the fat-shattering dimension at scale s" or
//! "the metric entropy at scale s and sample size n", it takes a handle, so
//! closed-form surrogates and empirical estimates plug in interchangeably.

use std::sync::Arc;

use crate::core::BoundParams;
use crate::error::{param_err, Result};

/// scale -> fat-shattering dimension surrogate. Must be nonnegative and
/// non-increasing in the scale; `check_shape` probes that on a scale grid.
#[derive(Clone)]
pub struct FatFn(Arc<dyn Fn(f64) -> f64 + Send + Sync>);

impl FatFn {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        FatFn(Arc::new(f))
    }

    pub fn constant(value: f64) -> Self {
        FatFn(Arc::new(move |_| value))
    }

    /// Backed by the BV fat-shattering bound (1 + A sqrt(VKd)/s)^d. The raw
    /// formula is evaluated at every positive scale: beyond s = M the true
    /// dimension is zero, so the formula stays a valid upper bound there.
    pub fn bv(params: &BoundParams) -> Result<Self> {
        params.validate()?;
        let a = params.a;
        let coeff = (params.v * params.k * params.d as f64).sqrt();
        let d = params.d as i32;
        Ok(FatFn(Arc::new(move |scale: f64| {
            (1.0 + a * coeff / scale).powi(d)
        })))
    }

    pub fn eval(&self, scale: f64) -> f64 {
        (self.0)(scale)
    }

    /// Probe nonnegativity and monotonicity on sampled scales.
    pub fn check_shape(&self, scales: &[f64]) -> Result<()> {
        let mut sorted = scales.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite scales"));
        let mut prev = f64::INFINITY;
        for &s in &sorted {
            let v = self.eval(s);
            if !(v >= 0.0) {
                return param_err("fat_fn", format!("negative value {v} at scale {s}"));
            }
            if v > prev + 1e-9 {
                return param_err("fat_fn", format!("not non-increasing at scale {s}"));
            }
            prev = v;
        }
        Ok(())
    }
}

impl std::fmt::Debug for FatFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("FatFn(..)")
    }
}

/// (scale, sample size) -> metric entropy surrogate ln N.
#[derive(Clone)]
pub struct EntropyFn(Arc<dyn Fn(f64, u64) -> f64 + Send + Sync>);

impl EntropyFn {
    pub fn new(f: impl Fn(f64, u64) -> f64 + Send + Sync + 'static) -> Self {
        EntropyFn(Arc::new(f))
    }

    pub fn constant(value: f64) -> Self {
        EntropyFn(Arc::new(move |_, _| value))
    }

    /// The entropy of a singleton class.
    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn eval(&self, scale: f64, n: u64) -> f64 {
        (self.0)(scale, n)
    }

    pub fn check_shape(&self, scales: &[f64], n: u64) -> Result<()> {
        let mut sorted = scales.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite scales"));
        let mut prev = f64::INFINITY;
        for &s in &sorted {
            let v = self.eval(s, n);
            if !(v >= 0.0) {
                return param_err("entropy_fn", format!("negative value {v} at scale {s}"));
            }
            if v > prev + 1e-9 {
                return param_err("entropy_fn", format!("not non-increasing at scale {s}"));
            }
            prev = v;
        }
        Ok(())
    }
}

impl std::fmt::Debug for EntropyFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("EntropyFn(..)")
    }
}

/// Mixing-coefficient function k -> beta(k).
#[derive(Clone)]
pub struct MixingCoeff(Arc<dyn Fn(u64) -> f64 + Send + Sync>);

impl MixingCoeff {
    pub fn new(f: impl Fn(u64) -> f64 + Send + Sync + 'static) -> Self {
        MixingCoeff(Arc::new(f))
    }

    pub fn zero() -> Self {
        MixingCoeff(Arc::new(|_| 0.0))
    }

    /// beta(k) = rho^k, the geometric envelope of a stay-or-refresh chain.
    pub fn geometric(rho: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&rho) {
            return param_err("rho", format!("must lie in [0, 1), got {rho}"));
        }
        Ok(MixingCoeff(Arc::new(move |k| rho.powi(k as i32))))
    }

    /// beta(k) = beta0 k^-exponent (algebraic mixing).
    pub fn algebraic(beta0: f64, exponent: f64) -> Result<Self> {
        if !(beta0 > 0.0 && exponent > 0.0) {
            return param_err("beta0", "algebraic mixing needs positive beta0 and exponent");
        }
        Ok(MixingCoeff(Arc::new(move |k| {
            beta0 * (k as f64).powf(-exponent)
        })))
    }

    /// beta(k) = beta0 exp(-rate k^exponent) (exponential mixing).
    pub fn exponential(beta0: f64, rate: f64, exponent: f64) -> Result<Self> {
        if !(beta0 > 0.0 && rate > 0.0 && exponent > 0.0) {
            return param_err("beta0", "exponential mixing needs positive parameters");
        }
        Ok(MixingCoeff(Arc::new(move |k| {
            beta0 * (-rate * (k as f64).powf(exponent)).exp()
        })))
    }

    pub fn eval(&self, k: u64) -> f64 {
        (self.0)(k)
    }
}

impl std::fmt::Debug for MixingCoeff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("MixingCoeff(..)")
    }
}

/// Logarithm base used by the squared-log factors. The fat decomposition is
/// proved with base-2 logs while the entropy corollary is displayed with
/// natural logs; both evaluators accept an override.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Two,
    E,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::E => x.ln(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bv_handle_matches_formula_and_shape() {
        let params = BoundParams {
            v: 4.0,
            d: 2,
            ..BoundParams::default()
        };
        let fat = FatFn::bv(&params).unwrap();
        assert!((fat.eval(0.5) - 44.313708498984760).abs() < 1e-9);
        fat.check_shape(&[0.05, 0.1, 0.2, 0.5, 1.0, 2.0]).unwrap();
    }

    #[test]
    fn shape_check_rejects_increasing_handles() {
        let bad = FatFn::new(|s| s);
        assert!(bad.check_shape(&[0.1, 0.2]).is_err());
    }

    #[test]
    fn geometric_mixing_decays() {
        let beta = MixingCoeff::geometric(0.5).unwrap();
        assert_eq!(beta.eval(10), 0.5f64.powi(10));
        assert!(MixingCoeff::geometric(1.0).is_err());
    }
}
