//! Payload construction. Every floating-point field is emitted twice: as a
//! JSON number and as a fixed 17-significant-digit decimal string in a
//! sibling `<key>_str` field, so readers that round floats can still
//! recover the exact value. Non-finite values map to null with the string
//! twin carrying "inf"/"NaN".

use num_complex::Complex64;
use serde_json::{Map, Value};

pub(crate) fn number(v: f64) -> Value {
    serde_json::Number::from_f64(v)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

pub(crate) fn decimal(v: f64) -> String {
    format!("{v:.17e}")
}

/// Insert `key` and `key_str` for one float.
pub(crate) fn put_f64(map: &mut Map<String, Value>, key: &str, v: f64) {
    map.insert(key.to_owned(), number(v));
    map.insert(format!("{key}_str"), Value::String(decimal(v)));
}

/// Insert `key` as a [re, im] pair plus its string twin.
pub(crate) fn put_complex(map: &mut Map<String, Value>, key: &str, z: Complex64) {
    map.insert(
        key.to_owned(),
        Value::Array(vec![number(z.re), number(z.im)]),
    );
    map.insert(
        format!("{key}_str"),
        Value::Array(vec![
            Value::String(decimal(z.re)),
            Value::String(decimal(z.im)),
        ]),
    );
}

pub(crate) fn put_u64(map: &mut Map<String, Value>, key: &str, v: u64) {
    map.insert(key.to_owned(), Value::Number(v.into()));
}

pub(crate) fn put_str(map: &mut Map<String, Value>, key: &str, v: &str) {
    map.insert(key.to_owned(), Value::String(v.to_owned()));
}

pub(crate) fn put_bool(map: &mut Map<String, Value>, key: &str, v: bool) {
    map.insert(key.to_owned(), Value::Bool(v));
}

/// Insert a float array plus its string twin.
pub(crate) fn put_f64_list(map: &mut Map<String, Value>, key: &str, vs: &[f64]) {
    map.insert(key.to_owned(), Value::Array(vs.iter().map(|&v| number(v)).collect()));
    map.insert(
        format!("{key}_str"),
        Value::Array(vs.iter().map(|&v| Value::String(decimal(v))).collect()),
    );
}

pub(crate) fn to_json(map: Map<String, Value>) -> String {
    let mut s = serde_json::to_string_pretty(&Value::Object(map))
        .expect("json maps of finite values always serialize");
    s.push('\n');
    s
}

/// One CSV document from a header and rows of preformatted cells.
pub(crate) fn to_csv(header: &str, rows: &[Vec<String>]) -> String {
    let mut s = String::with_capacity(64 * (rows.len() + 1));
    s.push_str(header);
    s.push('\n');
    for row in rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_twin_round_trips_exactly() {
        for &v in &[
            -0.052161,
            std::f64::consts::PI,
            1.0 / 3.0,
            6.24697e-124,
            -1.7976931348623157e308,
        ] {
            let parsed: f64 = decimal(v).parse().unwrap();
            assert_eq!(parsed.to_bits(), v.to_bits());
        }
    }

    #[test]
    fn non_finite_values_become_null_with_readable_twin() {
        let mut m = Map::new();
        put_f64(&mut m, "bound", f64::INFINITY);
        assert_eq!(m["bound"], Value::Null);
        assert_eq!(m["bound_str"], Value::String("inf".into()));
    }

    #[test]
    fn json_keys_are_sorted() {
        let mut m = Map::new();
        put_u64(&mut m, "zeta", 1);
        put_u64(&mut m, "alpha", 2);
        let s = to_json(m);
        assert!(s.find("alpha").unwrap() < s.find("zeta").unwrap());
    }
}
