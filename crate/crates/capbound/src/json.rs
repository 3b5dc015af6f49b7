//! Deterministic JSON encoding with fixed-width floats.
//!
//! File formats that must be byte-stable across runs (grid-function files,
//! sweep CSVs) write every real with 17 significant digits, enough to
//! round-trip any f64 exactly.

use std::io;

use serde::Serialize;

use crate::error::Result;

/// Format a float with 17 significant digits (scientific notation).
pub fn fmt_f64_17(value: f64) -> String {
    if value.is_finite() {
        format!("{value:.16e}")
    } else if value.is_nan() {
        "nan".to_string()
    } else if value > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

struct SigDigits17;

impl serde_json::ser::Formatter for SigDigits17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

/// Serialize to compact JSON, floats written with 17 significant digits.
pub fn to_string_17<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits17);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json emits utf8"))
}
