//! Records and their json / csv / pretty renderings.

use std::time::{SystemTime, UNIX_EPOCH};

use clap::ValueEnum;
use qes_core::ratpoly::{format_rational, Rational};
use serde_json::{Map, Number, Value};

pub const SCHEMA: &str = "qes/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// A float with 17 significant digits, positional where that stays short.
pub fn float_text(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0.0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..17).contains(&exp) {
        format!("{:.*}", (16 - exp) as usize, x)
    } else {
        format!("{x:.16e}")
    }
}

pub fn float(x: f64) -> Value {
    match float_text(x).parse::<Number>() {
        Ok(n) if x.is_finite() => Value::Number(n),
        _ => Value::Null,
    }
}

pub fn exact(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

/// Rows for the csv and pretty renderings.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

pub struct Record {
    pub command: &'static str,
    pub params: Map<String, Value>,
    pub result: Value,
    pub table: Table,
    /// Extra lines for the pretty rendering (warnings, summaries).
    pub notes: Vec<String>,
}

impl Record {
    pub fn new(command: &'static str) -> Self {
        Record {
            command,
            params: Map::new(),
            result: Value::Null,
            table: Table::default(),
            notes: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: Value) {
        self.params.insert(key.to_string(), value);
    }

    pub fn render(&self, format: Format, meta: bool) -> String {
        match format {
            Format::Json => self.json(meta),
            Format::Csv => self.csv(),
            Format::Pretty => self.pretty(meta),
        }
    }

    fn json(&self, meta: bool) -> String {
        let mut root = Map::new();
        root.insert("schema".into(), SCHEMA.into());
        root.insert("command".into(), self.command.into());
        root.insert("params".into(), Value::Object(self.params.clone()));
        root.insert("result".into(), self.result.clone());
        if meta {
            let mut m = Map::new();
            m.insert("version".into(), env!("CARGO_PKG_VERSION").into());
            m.insert("timestamp".into(), timestamp().into());
            root.insert("meta".into(), Value::Object(m));
        }
        let mut text = serde_json::to_string_pretty(&Value::Object(root)).expect("serializable");
        text.push('\n');
        text
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        for line in std::iter::once(&self.table.header).chain(&self.table.rows) {
            let cells: Vec<String> = line.iter().map(|c| csv_cell(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn pretty(&self, meta: bool) -> String {
        let mut out = String::new();
        let params: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}={s}"),
                other => format!("{k}={other}"),
            })
            .collect();
        out.push_str(&format!("{} {}\n", self.command, params.join(" ")));
        if meta {
            out.push_str(&format!("qes {} at {}\n", env!("CARGO_PKG_VERSION"), timestamp()));
        }
        let t = &self.table;
        let mut widths: Vec<usize> = t.header.iter().map(|h| h.len()).collect();
        for row in &t.rows {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        for line in std::iter::once(&t.header).chain(&t.rows) {
            let cells: Vec<String> = line
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        for note in &self.notes {
            out.push_str(note);
            out.push('\n');
        }
        out
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}
