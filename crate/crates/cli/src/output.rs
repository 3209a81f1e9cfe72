//! Row output as CSV or newline-delimited JSON.

use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(u64),
    Real(f64),
    Bool(bool),
    Text(String),
    Missing,
}

impl Value {
    /// Integers exactly, reals with 17 significant digits.
    fn csv_field(&self) -> String {
        match self {
            Value::Int(n) => n.to_string(),
            Value::Real(r) => format_real(*r),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
            Value::Missing => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Value::Real(r) if !r.is_finite() => "null".to_string(),
            Value::Text(s) => serde_json::to_string(s).expect("strings serialize"),
            Value::Missing => "null".to_string(),
            other => other.csv_field(),
        }
    }
}

impl From<u64> for Value {
    fn from(n: u64) -> Self {
        Value::Int(n)
    }
}

impl From<f64> for Value {
    fn from(r: f64) -> Self {
        Value::Real(r)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Missing, Into::into)
    }
}

pub fn format_real(r: f64) -> String {
    format!("{r:.16e}")
}

/// One output row; keys keep insertion order, which is the column order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record {
    fields: Vec<(&'static str, Value)>,
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.fields.push((key, value.into()));
        self
    }

    #[cfg(test)]
    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }

    fn keys(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.fields.iter().map(|(k, _)| *k)
    }
}

pub fn write_records(out: impl Write, format: Format, records: &[Record]) -> Result<()> {
    match format {
        Format::Csv => write_csv(out, records),
        Format::Json => write_ndjson(out, records),
    }
}

fn write_csv(out: impl Write, records: &[Record]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    if let Some(first) = records.first() {
        writer.write_record(first.keys())?;
    }
    for record in records {
        writer.write_record(record.fields.iter().map(|(_, v)| v.csv_field()))?;
    }
    writer.flush()?;
    Ok(())
}

fn write_ndjson(mut out: impl Write, records: &[Record]) -> Result<()> {
    for record in records {
        let body: Vec<String> = record
            .fields
            .iter()
            .map(|(k, v)| format!("{}:{}", serde_json::to_string(k).expect("keys"), v.json()))
            .collect();
        writeln!(out, "{{{}}}", body.join(","))?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn render(format: Format, records: &[Record]) -> String {
        let mut buf = Vec::new();
        write_records(&mut buf, format, records).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn reals_keep_seventeen_digits() {
        assert_eq!(format_real(0.1), "1.0000000000000001e-1");
        assert_eq!(format_real(57.0).parse::<f64>().unwrap(), 57.0);
        let r = 1.0531820513_f64;
        assert_eq!(format_real(r).parse::<f64>().unwrap(), r);
    }

    #[test]
    fn csv_has_header_and_empty_missing() {
        let rows = [
            Record::new().with("x", 100u64).with("epsilon", Some(1u64)),
            Record::new().with("x", 4u64).with("epsilon", None::<u64>),
        ];
        assert_eq!(render(Format::Csv, &rows), "x,epsilon\n100,1\n4,\n");
    }

    #[test]
    fn ndjson_rows_parse() {
        let rows = [Record::new().with("x", 10u64).with("t", "3/2".to_string()).with("r", 0.5).with("m", None::<f64>)];
        let text = render(Format::Json, &rows);
        assert_eq!(text.lines().count(), 1);
        let v: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
        assert_eq!(v["x"], 10);
        assert_eq!(v["t"], "3/2");
        assert_eq!(v["r"], 0.5);
        assert!(v["m"].is_null());
    }

    #[test]
    fn no_rows_no_output() {
        assert_eq!(render(Format::Csv, &[]), "");
        assert_eq!(render(Format::Json, &[]), "");
    }
}
