//! Auxiliary scalar inequalities used inside the bound derivations, exposed
//! as testable predicates so sweeps can falsify them if an implementation
//! detail is wrong.

use serde::{Deserialize, Serialize};

use crate::error::{param_err, Result};

/// Both sides of an inequality, evaluated.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuxCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

fn check(lhs: f64, rhs: f64) -> AuxCheck {
    AuxCheck {
        lhs,
        rhs,
        holds: lhs <= rhs,
    }
}

/// Bartlett's squared-log absorption: for a, b, x >= 1,
///
/// ```text
/// a log2^2(b x) <= x/2 + 16 a log2^2(16 a b)
/// ```
pub fn bartlett_log_inequality(a: f64, b: f64, x: f64) -> Result<AuxCheck> {
    for (name, v) in [("a", a), ("b", b), ("x", x)] {
        if !(v >= 1.0) || !v.is_finite() {
            return param_err("aux", format!("{name} must be >= 1, got {v}"));
        }
    }
    let lhs = a * (b * x).log2().powi(2);
    let rhs = x / 2.0 + 16.0 * a * (16.0 * a * b).log2().powi(2);
    Ok(check(lhs, rhs))
}

/// The log-root absorption used to solve sample-size recurrences: for
/// K > 0 and n >= 1,
///
/// ```text
/// ln n <= sqrt(K n) + ln(4 / (K e^2))
/// ```
///
/// Equality holds at n = 4/K (and at K = 4, n = 1).
pub fn ln_sqrt_inequality(k: f64, n: f64) -> Result<AuxCheck> {
    if !(k > 0.0) || !k.is_finite() {
        return param_err("aux", format!("K must be positive, got {k}"));
    }
    if !(n >= 1.0) || !n.is_finite() {
        return param_err("aux", format!("n must be >= 1, got {n}"));
    }
    let lhs = n.ln();
    let rhs = (k * n).sqrt() + (4.0 / (k * std::f64::consts::E.powi(2))).ln();
    Ok(check(lhs, rhs))
}

/// Inequality selector for the CLI surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum AuxKind {
    BartlettLog { a: f64, b: f64, x: f64 },
    LnSqrt { k: f64, n: f64 },
}

pub fn aux_inequality(kind: AuxKind) -> Result<AuxCheck> {
    match kind {
        AuxKind::BartlettLog { a, b, x } => bartlett_log_inequality(a, b, x),
        AuxKind::LnSqrt { k, n } => ln_sqrt_inequality(k, n),
    }
}
