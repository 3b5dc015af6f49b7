//! Estimate records emitted by the capacity estimators.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{param_err, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CapacityKind {
    Covering,
    Packing,
    Fat,
    Rademacher,
}

/// A (lower, upper) enclosure for one capacity quantity at one scale, plus
/// bookkeeping: the method that produced it, the seed it consumed, a work
/// counter, and free-form numeric diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CapacityEstimate {
    pub kind: CapacityKind,
    pub scale: f64,
    pub lower: f64,
    /// May be infinite when no finite upper bound is known.
    #[serde(with = "maybe_infinite")]
    pub upper: f64,
    pub method: String,
    pub seed: u64,
    pub work: u64,
    pub diagnostics: BTreeMap<String, f64>,
}

impl CapacityEstimate {
    pub fn new(
        kind: CapacityKind,
        scale: f64,
        lower: f64,
        upper: f64,
        method: impl Into<String>,
        seed: u64,
        work: u64,
    ) -> Result<Self> {
        if !(lower >= 0.0) {
            return param_err("lower", format!("must be >= 0, got {lower}"));
        }
        if lower > upper {
            return param_err("upper", format!("lower {lower} exceeds upper {upper}"));
        }
        Ok(CapacityEstimate {
            kind,
            scale,
            lower,
            upper,
            method: method.into(),
            seed,
            work,
            diagnostics: BTreeMap::new(),
        })
    }

    pub fn with_diagnostic(mut self, key: &str, value: f64) -> Self {
        self.diagnostics.insert(key.to_string(), value);
        self
    }
}

/// JSON cannot carry f64 infinities; encode them as null.
mod maybe_infinite {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_some(v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}
