//! Deterministic JSON: object keys sorted, floats rounded to 9 significant digits.

use serde::Serialize;
use serde_json::Value;

use crate::error::Result;

pub const SIGNIFICANT_DIGITS: usize = 9;

/// Round `x` to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

fn canonicalize(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if n.is_f64() {
                if let Some(x) = n.as_f64() {
                    if let Some(r) = serde_json::Number::from_f64(round_sig(x)) {
                        *n = r;
                    }
                }
            }
        }
        Value::Array(a) => a.iter_mut().for_each(canonicalize),
        Value::Object(o) => o.values_mut().for_each(canonicalize),
        _ => {}
    }
}

pub fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    let mut v = serde_json::to_value(x)?;
    canonicalize(&mut v);
    Ok(v)
}

pub fn to_string_pretty<T: Serialize>(x: &T) -> Result<String> {
    let v = to_value(x)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}
