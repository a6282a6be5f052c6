//! Deterministic JSON output: keys in a fixed order and every float rounded
//! to 12 significant digits.

use serde::Serialize;
use serde_json::Value;

use crate::error::{Result, TetraError};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` rounded to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_significant(n.as_f64().expect("f64 number"));
            if let Some(r) = serde_json::Number::from_f64(x) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Rounded JSON tree of `v`.
pub fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    let mut value = serde_json::to_value(v).map_err(|e| TetraError::InvalidParameter(e.to_string()))?;
    round_value(&mut value);
    Ok(value)
}

/// Pretty-printed rounded JSON, newline-terminated.
pub fn to_string<T: Serialize>(v: &T) -> Result<String> {
    let value = to_value(v)?;
    let mut s = serde_json::to_string_pretty(&value).map_err(|e| TetraError::InvalidParameter(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
