//! Evaluation records for the closed-form calculators.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Flags attached to bound evaluations.
pub mod flag {
    /// A log factor went negative; the bound was clamped to 0.
    pub const VACUOUS: &str = "vacuous-regime";
    /// The fat surrogate fell below 1, outside the formula's regime.
    pub const FAT_BELOW_ONE: &str = "fat-below-one";
    /// The fat surrogate is exactly zero; the formula degenerates.
    pub const FAT_ZERO: &str = "fat-zero";
    /// A tail probability below 1 (the bound says something).
    pub const INFORMATIVE: &str = "informative";
    /// A tail probability at or above 1 (the bound says nothing).
    pub const UNINFORMATIVE: &str = "uninformative";
    /// The value overflowed to +infinity; reported, never saturated silently.
    pub const OVERFLOW: &str = "overflow";
}

/// One evaluated formula: the value, any regime flags, and the named
/// intermediate quantities that produced it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    /// CLI token of the formula ("bv-fat", "thm3", ...).
    pub formula: String,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub diagnostics: BTreeMap<String, f64>,
}

impl BoundReport {
    pub fn new(formula: &str, value: f64) -> Self {
        let mut report = BoundReport {
            formula: formula.to_string(),
            value,
            flags: Vec::new(),
            diagnostics: BTreeMap::new(),
        };
        if value.is_infinite() {
            report.flags.push(flag::OVERFLOW.to_string());
        }
        report
    }

    pub fn with_flag(mut self, f: &str) -> Self {
        if !self.flags.iter().any(|x| x == f) {
            self.flags.push(f.to_string());
        }
        self
    }

    pub fn with_flag_if(self, condition: bool, f: &str) -> Self {
        if condition {
            self.with_flag(f)
        } else {
            self
        }
    }

    pub fn with_diagnostic(mut self, key: &str, value: f64) -> Self {
        self.diagnostics.insert(key.to_string(), value);
        self
    }

    pub fn has_flag(&self, f: &str) -> bool {
        self.flags.iter().any(|x| x == f)
    }
}

/// ln(x) clamped at 0 for x < 1. Returns the factor and whether clamping
/// fired; callers flag the report as vacuous when it did.
pub(crate) fn ln_clamped(x: f64) -> (f64, bool) {
    if x < 1.0 {
        (0.0, true)
    } else {
        (x.ln(), false)
    }
}

/// Same clamping for an arbitrary log base.
pub(crate) fn log_clamped(base: super::LogBase, x: f64) -> (f64, bool) {
    if x < 1.0 {
        (0.0, true)
    } else {
        (base.log(x), false)
    }
}
