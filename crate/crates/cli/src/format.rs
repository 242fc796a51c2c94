//! Fixed numeric formatting shared by every output file.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};

/// Scientific notation with 17 significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

/// Compact JSON whose floats are written with [`sci`], so repeated runs are
/// byte-identical and every value round-trips.
struct SciFormatter;

impl Formatter for SciFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(sci(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serializes `value` as one line of JSON terminated by '\n'.
pub fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, SciFormatter);
    value.serialize(&mut ser).expect("in-memory serialization");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_use_fixed_width_exponent_form() {
        assert_eq!(sci(1.0), "1.0000000000000000e0");
        assert_eq!(sci(-2.5e-3), "-2.5000000000000001e-3");
        assert_eq!(sci(-0.375), "-3.7500000000000000e-1");
        let line = to_json_line(&serde_json::json!({"a": 0.1, "b": [1.0, 2], "c": "x"}));
        assert_eq!(line, "{\"a\":1.0000000000000001e-1,\"b\":[1.0000000000000000e0,2],\"c\":\"x\"}\n");
        let back: serde_json::Value = serde_json::from_str(&line).unwrap();
        assert_eq!(back["a"].as_f64(), Some(0.1));
    }
}
