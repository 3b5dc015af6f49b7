//! The shared parameter bundle consumed by the closed-form calculators.

use serde::{Deserialize, Serialize};

use crate::error::{param_err, Result};

/// Symbols appearing across the bound formulas: domain geometry (A, d), the
/// range and variation budgets (M, V), class count C, margin gamma, scale
/// epsilon, confidence delta, and the unknown absolute constants of the
/// respective theorems (K, K_P, K1, K2, K3, K_F), all defaulting to 1.0.
/// The theorems assert only that such constants exist; keeping them explicit
/// and echoed in every report makes the choice auditable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundParams {
    /// Side length A of the domain cube [0, A]^d.
    #[serde(rename = "A")]
    pub a: f64,
    /// Range bound M of component functions.
    #[serde(rename = "M")]
    pub m: f64,
    /// Total variation budget V; M <= V always.
    #[serde(rename = "V")]
    pub v: f64,
    /// Input dimension d.
    pub d: usize,
    /// Number of classes C.
    #[serde(rename = "C")]
    pub c: usize,
    /// Margin parameter, in (0, 1].
    pub gamma: f64,
    /// Deviation scale, positive.
    pub epsilon: f64,
    /// Confidence parameter, in (0, 1).
    pub delta: f64,
    /// Constant of the BV fat-shattering bound.
    #[serde(rename = "K")]
    pub k: f64,
    /// Density bound constant of the L1(P) entropy bound.
    #[serde(rename = "K_P")]
    pub k_p: f64,
    /// First sample-size constant; K1 < K2 when both are set explicitly.
    #[serde(rename = "K1")]
    pub k1: f64,
    /// Second sample-size constant.
    #[serde(rename = "K2")]
    pub k2: f64,
    /// Effective-sample-complexity constant.
    #[serde(rename = "K3")]
    pub k3: f64,
    /// Class constant of the Rademacher-route fat bound.
    #[serde(rename = "K_F")]
    pub k_f: f64,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams {
            a: 1.0,
            m: 1.0,
            v: 1.0,
            d: 1,
            c: 1,
            gamma: 1.0,
            epsilon: 0.5,
            delta: 0.05,
            k: 1.0,
            k_p: 1.0,
            k1: 1.0,
            k2: 1.0,
            k3: 1.0,
            k_f: 1.0,
        }
    }
}

impl BoundParams {
    /// Check the standing constraints. Scale-domain requirements such as
    /// `epsilon <= M` are validated per operation, not here.
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("A", self.a),
            ("M", self.m),
            ("V", self.v),
            ("K", self.k),
            ("K_P", self.k_p),
            ("K1", self.k1),
            ("K2", self.k2),
            ("K3", self.k3),
            ("K_F", self.k_f),
            ("epsilon", self.epsilon),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return param_err("params", format!("{name} must be positive, got {value}"));
            }
        }
        if self.d == 0 {
            return param_err("params", "d must be >= 1");
        }
        if self.c == 0 {
            return param_err("params", "C must be >= 1");
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return param_err("params", format!("gamma must lie in (0, 1], got {}", self.gamma));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return param_err("params", format!("delta must lie in (0, 1), got {}", self.delta));
        }
        if self.m > self.v {
            return param_err(
                "params",
                format!("M = {} must not exceed V = {}", self.m, self.v),
            );
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        BoundParams::default().validate().unwrap();
    }

    #[test]
    fn rejects_m_above_v() {
        let p = BoundParams {
            m: 2.0,
            v: 1.0,
            ..BoundParams::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn rejects_bad_ranges() {
        let mut p = BoundParams {
            gamma: 0.0,
            ..BoundParams::default()
        };
        assert!(p.validate().is_err());
        p.gamma = 1.0;
        p.delta = 1.0;
        assert!(p.validate().is_err());
        p.delta = 0.5;
        p.c = 0;
        assert!(p.validate().is_err());
    }
}
