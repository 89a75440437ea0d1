//! Deterministic JSON output: keys sorted, floats with 17 significant
//! digits, non-finite values spelled out as strings. Identical inputs must
//! produce byte-identical reports.

use serde_json::{Map, Number, Value};

/// Wrap a float as a JSON value; infinities and NaN become strings because
/// JSON numbers cannot carry them.
pub fn num(f: f64) -> Value {
    match Number::from_f64(f) {
        Some(n) => Value::Number(n),
        None => {
            let s = if f.is_nan() {
                "nan"
            } else if f > 0.0 {
                "inf"
            } else {
                "-inf"
            };
            Value::String(s.to_string())
        }
    }
}

pub fn vec2(v: ars3d::Vec2) -> Value {
    Value::Array(vec![num(v.x), num(v.y)])
}

pub fn mat2(m: ars3d::Mat2) -> Value {
    Value::Array(vec![
        Value::Array(vec![num(m.m[0][0]), num(m.m[0][1])]),
        Value::Array(vec![num(m.m[1][0]), num(m.m[1][1])]),
    ])
}

pub fn point(p: ars3d::GroupPoint) -> Value {
    let mut o = Map::new();
    o.insert("t".into(), num(p.t));
    o.insert("v".into(), vec2(p.v));
    Value::Object(o)
}

/// Render with sorted keys (the map is ordered) and a trailing newline.
/// Floats print as `{:.16e}`: a 17-significant-digit round trip.
pub fn render(v: &Value) -> String {
    let mut out = String::new();
    emit(v, &mut out);
    out.push('\n');
    out
}

fn emit(v: &Value, out: &mut String) {
    use std::fmt::Write;
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                write!(out, "{i}").unwrap();
            } else if let Some(u) = n.as_u64() {
                write!(out, "{u}").unwrap();
            } else {
                write!(out, "{:.16e}", n.as_f64().unwrap()).unwrap();
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string serializes"))
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                emit(item, out);
            }
            out.push(']');
        }
        Value::Object(fields) => {
            out.push('{');
            for (i, (k, item)) in fields.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(k).expect("key serializes"));
                out.push(':');
                emit(item, out);
            }
            out.push('}');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keys_come_out_sorted() {
        let v = json!({"zeta": 1, "alpha": 2, "mid": {"b": 1, "a": 2}});
        assert_eq!(render(&v), "{\"alpha\":2,\"mid\":{\"a\":2,\"b\":1},\"zeta\":1}\n");
    }

    #[test]
    fn floats_carry_seventeen_digits() {
        let v = json!({"x": 0.1});
        assert_eq!(render(&v), "{\"x\":1.0000000000000001e-1}\n");
        assert_eq!(render(&num(f64::INFINITY)), "\"inf\"\n");
        assert_eq!(render(&num(f64::NEG_INFINITY)), "\"-inf\"\n");
    }

    #[test]
    fn integers_stay_integers() {
        let v = json!({"n": 3u64, "k": -2i64});
        assert_eq!(render(&v), "{\"k\":-2,\"n\":3}\n");
    }
}
