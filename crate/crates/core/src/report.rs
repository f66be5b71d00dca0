//! Serialization helpers shared by every report.

use std::str::FromStr;

use serde::{Serialize, Serializer};

/// Formats a float with 17 significant digits and a signed exponent, e.g. `2.5000000000000000e+0`.
pub fn fmt_f64(x: f64) -> String {
    let s = format!("{x:.16e}");
    match s.split_once('e') {
        Some((m, e)) if !e.starts_with('-') => format!("{m}e+{e}"),
        _ => s,
    }
}

/// Serializes a float as a JSON number with 17 significant digits (`null` if not finite).
pub fn ser_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if !x.is_finite() {
        return s.serialize_none();
    }
    match serde_json::Number::from_str(&fmt_f64(*x)) {
        Ok(n) => n.serialize(s),
        Err(_) => s.serialize_f64(*x),
    }
}

/// [`ser_f64`] for every element of a slice.
pub fn ser_f64_seq<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&F64(*x))?;
    }
    seq.end()
}

struct F64(f64);

impl Serialize for F64 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ser_f64(&self.0, s)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable report")
}
