//! Output formatting. Machine formats (json, csv) serialize every float
//! with 17 significant digits so a reparse recovers the exact bits and
//! any numeric drift shows up in diffs; the human format rounds to six
//! decimal places.

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

/// 17 significant digits; round-trips any finite f64.
pub fn machine(x: f64) -> String {
    format!("{x:.16e}")
}

/// Six decimal places for eyeballing.
pub fn human(x: f64) -> String {
    format!("{x:.6}")
}

pub fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            ch if (ch as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", ch as u32)),
            ch => out.push(ch),
        }
    }
    out
}

pub fn json_f64_array(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|&v| machine(v)).collect();
    format!("[{}]", parts.join(","))
}

/// Flat json object builder; fields keep insertion order.
#[derive(Default)]
pub struct JsonObject {
    fields: Vec<String>,
}

impl JsonObject {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn f64(&mut self, key: &str, value: f64) -> &mut Self {
        self.raw(key, &machine(value))
    }

    pub fn u64(&mut self, key: &str, value: u64) -> &mut Self {
        self.raw(key, &value.to_string())
    }

    pub fn bool(&mut self, key: &str, value: bool) -> &mut Self {
        self.raw(key, if value { "true" } else { "false" })
    }

    pub fn str(&mut self, key: &str, value: &str) -> &mut Self {
        self.raw(key, &format!("\"{}\"", json_escape(value)))
    }

    pub fn raw(&mut self, key: &str, value: &str) -> &mut Self {
        self.fields
            .push(format!("\"{}\":{}", json_escape(key), value));
        self
    }

    pub fn finish(&self) -> String {
        format!("{{{}}}", self.fields.join(","))
    }
}

/// One csv document from a header and machine-formatted rows.
pub fn csv_document(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Aligned key/value lines for the human format.
pub fn key_value_block(pairs: &[(&str, String)]) -> String {
    let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (key, value) in pairs {
        out.push_str(&format!("{key:<width$}  {value}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machine_format_has_17_significant_digits() {
        assert_eq!(machine(0.05), "5.0000000000000003e-2");
        let reparsed: f64 = machine(0.123_456_789_012_345_68).parse().unwrap();
        assert_eq!(reparsed.to_bits(), 0.123_456_789_012_345_68_f64.to_bits());
    }

    #[test]
    fn json_object_builds_in_order() {
        let mut obj = JsonObject::new();
        obj.str("kind", "uniform").u64("m", 100).f64("x", 0.5);
        assert_eq!(
            obj.finish(),
            "{\"kind\":\"uniform\",\"m\":100,\"x\":5.0000000000000000e-1}"
        );
    }

    #[test]
    fn escaping_handles_quotes_and_controls() {
        assert_eq!(json_escape("a\"b\\c\nd"), "a\\\"b\\\\c\\nd");
    }
}
