//! Report schema validation.
//!
//! The report envelope is described by `schemas/report.schema.json`,
//! shipped with the crate. The checker below implements the subset of JSON
//! Schema the file uses (type, const, enum, required, properties,
//! additionalProperties, items), enough to keep every emitted report
//! honest without pulling in a full validator.

use serde_json::Value;

use crate::error::{Error, Result};

pub const REPORT_SCHEMA_JSON: &str = include_str!("../../schemas/report.schema.json");

pub fn report_schema() -> Value {
    serde_json::from_str(REPORT_SCHEMA_JSON).expect("shipped schema parses")
}

/// Validate a report against the shipped schema.
pub fn validate_report(report: &Value) -> Result<()> {
    validate(report, &report_schema(), "$")
}

fn type_matches(value: &Value, ty: &str) -> bool {
    match ty {
        "object" => value.is_object(),
        "array" => value.is_array(),
        "string" => value.is_string(),
        "number" => value.is_number(),
        "integer" => value.is_i64() || value.is_u64(),
        "boolean" => value.is_boolean(),
        "null" => value.is_null(),
        _ => false,
    }
}

fn fail(path: &str, message: impl Into<String>) -> Error {
    Error::Config(format!("schema violation at {path}: {}", message.into()))
}

/// Validate `value` against `schema` (the supported subset).
pub fn validate(value: &Value, schema: &Value, path: &str) -> Result<()> {
    let obj = match schema.as_object() {
        Some(o) => o,
        None => return Ok(()),
    };
    if let Some(expected) = obj.get("const") {
        if value != expected {
            return Err(fail(path, format!("expected const {expected}")));
        }
    }
    if let Some(options) = obj.get("enum").and_then(Value::as_array) {
        if !options.contains(value) {
            return Err(fail(path, format!("value {value} not in enum")));
        }
    }
    if let Some(ty) = obj.get("type") {
        let ok = match ty {
            Value::String(t) => type_matches(value, t),
            Value::Array(ts) => ts
                .iter()
                .filter_map(Value::as_str)
                .any(|t| type_matches(value, t)),
            _ => true,
        };
        if !ok {
            return Err(fail(path, format!("expected type {ty}")));
        }
    }
    if let Some(required) = obj.get("required").and_then(Value::as_array) {
        for key in required.iter().filter_map(Value::as_str) {
            if value.get(key).is_none() {
                return Err(fail(path, format!("missing required key `{key}`")));
            }
        }
    }
    if let (Some(props), Some(map)) = (
        obj.get("properties").and_then(Value::as_object),
        value.as_object(),
    ) {
        for (key, sub) in props {
            if let Some(v) = map.get(key) {
                validate(v, sub, &format!("{path}.{key}"))?;
            }
        }
        if obj.get("additionalProperties") == Some(&Value::Bool(false)) {
            for key in map.keys() {
                if !props.contains_key(key) {
                    return Err(fail(path, format!("unexpected key `{key}`")));
                }
            }
        }
    }
    if let (Some(items), Some(arr)) = (obj.get("items"), value.as_array()) {
        for (i, v) in arr.iter().enumerate() {
            validate(v, items, &format!("{path}[{i}]"))?;
        }
    }
    Ok(())
}
