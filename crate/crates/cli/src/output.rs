//! Table rendering and atomic output.

use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};

use crate::args::Format;
use crate::error::CliError;

/// C `printf("%.*g", precision, v)`, with `-0` printed as `0`.
pub fn format_g(v: f64, precision: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let p = precision.max(1);
    // The exponent after rounding to p significant digits decides the style.
    let sci = format!("{:.*e}", p - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp) as usize;
        strip_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Named numeric columns of equal length plus run metadata.
pub struct Table {
    columns: Vec<(String, Vec<f64>)>,
    meta: Value,
}

impl Table {
    pub fn new(meta: Value) -> Self {
        Self {
            columns: Vec::new(),
            meta,
        }
    }

    pub fn column(mut self, name: &str, values: Vec<f64>) -> Self {
        if let Some((_, first)) = self.columns.first() {
            assert_eq!(
                first.len(),
                values.len(),
                "column `{name}` has the wrong length"
            );
        }
        self.columns.push((name.to_string(), values));
        self
    }

    pub fn to_csv(&self) -> String {
        let mut out = self
            .columns
            .iter()
            .map(|(n, _)| n.as_str())
            .collect::<Vec<_>>()
            .join(",");
        out.push('\n');
        let rows = self.columns.first().map_or(0, |(_, v)| v.len());
        for i in 0..rows {
            let row: Vec<String> = self
                .columns
                .iter()
                .map(|(_, v)| format_g(v[i], 12))
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// JSON object with one array per column; a leading `x` column is named
    /// `xs`. Metadata goes under `meta`.
    pub fn to_json(&self) -> String {
        let mut obj = Map::new();
        for (k, (name, values)) in self.columns.iter().enumerate() {
            let key = if k == 0 && name == "x" {
                "xs"
            } else {
                name.as_str()
            };
            let arr = values.iter().map(|&v| float_value(v)).collect();
            obj.insert(key.to_string(), Value::Array(arr));
        }
        obj.insert("meta".into(), self.meta.clone());
        let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("valid JSON");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

fn float_value(v: f64) -> Value {
    let v = if v == 0.0 { 0.0 } else { v };
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

/// Writes `text` to `path` through a temporary file in the same directory,
/// or to standard output.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    match path {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(io)?;
            stdout.flush().map_err(io)
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
            tmp.write_all(text.as_bytes()).map_err(io)?;
            tmp.persist(path).map_err(|e| io(e.error))?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (2.0 / std::f64::consts::PI, "0.636619772368"),
            (-0.0, "0"),
            (1.0, "1"),
            (0.5, "0.5"),
            (-2.5e-7, "-2.5e-07"),
            (1e-4, "0.0001"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (999999999999.5, "1e+12"),
            (1e100, "1e+100"),
            (0.1 + 0.2, "0.3"),
            (-0.99, "-0.99"),
        ];
        for (v, expected) in cases {
            assert_eq!(format_g(v, 12), expected, "{v}");
        }
        assert_eq!(format_g(f64::NAN, 12), "nan");
    }

    #[test]
    fn csv_and_json() {
        let t = Table::new(serde_json::json!({"k": 1}))
            .column("x", vec![-0.0, 1.0])
            .column("rho", vec![0.25, 0.0]);
        assert_eq!(t.to_csv(), "x,rho\n0,0.25\n1,0\n");
        let v: Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["xs"][1], 1.0);
        assert_eq!(v["rho"][0], 0.25);
        assert_eq!(v["meta"]["k"], 1);
    }
}
