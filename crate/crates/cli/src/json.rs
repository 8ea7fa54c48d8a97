//! JSON encodings shared by the commands.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::{json, Map, Value};
use whitehead_core::poly::LaurentPoly;

pub const SCHEMA: u32 = 1;

pub fn envelope(command: &str, p: i64, q: u32) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("command".into(), json!(command));
    m.insert("p".into(), json!(p));
    m.insert("q".into(), json!(q));
    m
}

pub fn complex(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

/// `{"exponent": "coefficient"}` in increasing exponent order.
pub fn laurent(f: &LaurentPoly<BigInt>) -> Value {
    Value::Object(f.terms().map(|(e, c)| (e.to_string(), Value::String(c.to_string()))).collect())
}

pub fn rational(x: &BigRational) -> Value {
    if x.is_integer() {
        Value::String(x.to_integer().to_string())
    } else {
        Value::String(format!("{}/{}", x.numer(), x.denom()))
    }
}

pub fn render(v: Map<String, Value>) -> String {
    let mut s = serde_json::to_string_pretty(&Value::Object(v)).expect("JSON values always serialize");
    s.push('\n');
    s
}
