//! Multi-class margin machinery and the truncated hinge loss.
//!
//! For a tuple g = (g_1, ..., g_C) of component scores, the margin of the
//! pair (x, y) is
//!
//! ```text
//! f_g(x, y) = (g_y(x) - max_{k != y} g_k(x)) / 2
//! ```
//!
//! and its truncation to `[0, gamma]` is f_{g,gamma} = max(0, min(gamma, f_g)).
//! The loss applied on top is the truncated hinge
//!
//! ```text
//! phi_gamma(t) = 1        for t <= 0
//!              = 1 - t/g  for t in (0, gamma]
//!              = 0        for t >  gamma
//! ```
//!
//! which is (1/gamma)-Lipschitz and insensitive to values of its argument
//! below 0 and above gamma, so `phi_gamma(f_g) == phi_gamma(f_{g,gamma})`
//! holds exactly, branch by branch, also in floating point.

use crate::core::MultiClassTuple;
use crate::error::{param_err, Error, Result};

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return param_err("gamma", format!("must lie in (0, 1], got {gamma}"));
    }
    Ok(())
}

/// Truncated hinge loss `phi_gamma(t)`, with values in [0, 1].
pub fn truncated_hinge_loss(t: f64, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    Ok(if t <= 0.0 {
        1.0
    } else if t <= gamma {
        1.0 - t / gamma
    } else {
        0.0
    })
}

/// Margin `f_g(x, y)`: half the gap between the score of the true class and
/// the best competing score. Lies in [-M/2, M/2].
pub fn margin(g: &MultiClassTuple, x: &[f64], y: usize) -> Result<f64> {
    let scores = g.evaluate(x)?;
    margin_of_scores(&scores, y)
}

/// Margin computed from already-evaluated component scores.
pub fn margin_of_scores(scores: &[f64], y: usize) -> Result<f64> {
    if y == 0 || y > scores.len() {
        return Err(Error::LabelOutOfRange {
            label: y,
            num_classes: scores.len(),
        });
    }
    let own = scores[y - 1];
    let mut best_other = f64::NEG_INFINITY;
    for (k, &s) in scores.iter().enumerate() {
        if k != y - 1 && s > best_other {
            best_other = s;
        }
    }
    Ok(0.5 * (own - best_other))
}

/// Truncated margin `f_{g,gamma}(x, y) = max(0, min(gamma, f_g(x, y)))`,
/// with values in [0, gamma].
pub fn truncated_margin(g: &MultiClassTuple, x: &[f64], y: usize, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    Ok(truncate(margin(g, x, y)?, gamma))
}

/// Clamp a raw margin to [0, gamma].
pub fn truncate(raw_margin: f64, gamma: f64) -> f64 {
    raw_margin.min(gamma).max(0.0)
}
