//! One result, three renderings.
//!
//! A result is an ordered list of named fields plus an optional table. JSON
//! nests both in one object; plain and CSV write the same values as text.

use std::io::Write;

use serde_json::{Map, Value};

use crate::args::Format;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub command: String,
    pub fields: Vec<(String, Value)>,
    pub table: Option<(String, Vec<Value>)>,
}

impl Output {
    pub fn new(command: &str) -> Self {
        Output { command: command.to_string(), fields: Vec::new(), table: None }
    }

    pub fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    /// Splits a serialized report into fields and the table under `table_key`.
    pub fn from_report(command: &str, report: Value, table_key: &str) -> Self {
        let mut out = Output::new(command);
        let Value::Object(map) = report else {
            return out.field("value", report);
        };
        for (k, v) in map {
            if k == table_key {
                let rows = match v {
                    Value::Array(rows) => rows,
                    other => vec![other],
                };
                out.table = Some((k, rows));
            } else {
                out.fields.push((k, v));
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        map.insert("schema_version".into(), SCHEMA_VERSION.into());
        map.insert("command".into(), self.command.clone().into());
        for (k, v) in &self.fields {
            map.insert(k.clone(), v.clone());
        }
        if let Some((k, rows)) = &self.table {
            map.insert(k.clone(), Value::Array(rows.clone()));
        }
        Value::Object(map)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json values serialize");
                s.push('\n');
                s
            }
            Format::Plain => self.plain(),
            Format::Csv => self.csv(),
        }
    }

    fn plain(&self) -> String {
        let mut s = String::new();
        match &self.table {
            None => {
                for (_, v) in &self.fields {
                    s.push_str(&scalar(v));
                    s.push('\n');
                }
            }
            Some((name, rows)) => {
                for (k, v) in &self.fields {
                    s.push_str(&format!("{k}: {}\n", scalar(v)));
                }
                let cols = columns(rows);
                s.push_str(&format!("# {name}: {}\n", cols.join("\t")));
                for row in rows {
                    let cells: Vec<String> = cols.iter().map(|c| scalar(&row[c.as_str()])).collect();
                    s.push_str(&cells.join("\t"));
                    s.push('\n');
                }
            }
        }
        s
    }

    fn csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        match &self.table {
            None => {
                w.write_record(self.fields.iter().map(|(k, _)| k.as_str())).expect("in-memory write");
                w.write_record(self.fields.iter().map(|(_, v)| scalar(v))).expect("in-memory write");
            }
            Some((_, rows)) => {
                // fields first as key,value pairs, then a blank line and the table
                for (k, v) in &self.fields {
                    w.write_record([k.clone(), scalar(v)]).expect("in-memory write");
                }
                w.write_record([""]).expect("in-memory write");
                let cols = columns(rows);
                w.write_record(&cols).expect("in-memory write");
                for row in rows {
                    w.write_record(cols.iter().map(|c| scalar(&row[c.as_str()]))).expect("in-memory write");
                }
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }

    pub fn emit(&self, format: Format, out: Option<&std::path::Path>) -> std::io::Result<()> {
        let text = self.render(format);
        match out {
            Some(path) => std::fs::write(path, text),
            None => std::io::stdout().lock().write_all(text.as_bytes()),
        }
    }
}

/// Column names of a table: keys of the first row.
fn columns(rows: &[Value]) -> Vec<String> {
    match rows.first() {
        Some(Value::Object(m)) => m.keys().cloned().collect(),
        _ => Vec::new(),
    }
}

/// Strings verbatim, everything else as compact JSON.
pub fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}
