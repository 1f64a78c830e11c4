use std::fmt;

use anyhow::Result;
use clap::ValueEnum;
use serde_json::{json, Map, Value};

use pcanon_core::laurent::LaurentPoly;

use crate::config::RunConfig;
use crate::TOOL;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
    Svg,
    Tikz,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

pub enum Cell {
    Text(String),
    /// Decimal integer of any size.
    Int(String),
    Poly(LaurentPoly),
}

impl Cell {
    pub fn int(x: impl ToString) -> Cell {
        Cell::Int(x.to_string())
    }

    fn plain(&self) -> String {
        match self {
            Cell::Text(s) | Cell::Int(s) => s.clone(),
            Cell::Poly(p) => p.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => json!(s),
            Cell::Int(s) => s.parse::<i64>().map(Value::from).unwrap_or_else(|_| json!(s)),
            Cell::Poly(p) => serde_json::to_value(p).expect("polynomials serialize"),
        }
    }
}

/// A table of results plus what was asked for.
pub struct Output {
    pub kind: &'static str,
    pub input: String,
    pub p: Option<i64>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Replaces the default text rendering.
    pub text: Option<String>,
}

impl Output {
    pub fn render(&self, fmt: Format, cfg: &RunConfig) -> Result<String> {
        Ok(match fmt {
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let m: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(r)
                            .map(|(c, v)| (c.to_string(), v.json()))
                            .collect();
                        Value::Object(m)
                    })
                    .collect();
                let mut top = json!({
                    "schema": 1,
                    "tool": TOOL,
                    "datum": cfg.datum_tag(),
                    "datum_hash": cfg.datum_hash(),
                    "table": cfg.table_hash(),
                    "kind": self.kind,
                    "input": self.input,
                });
                if let Some(p) = self.p {
                    top["p"] = json!(p);
                }
                top["rows"] = Value::Array(rows);
                serde_json::to_string_pretty(&top)? + "\n"
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(vec![]);
                w.write_record(&self.columns)?;
                for r in &self.rows {
                    w.write_record(r.iter().map(Cell::plain))?;
                }
                String::from_utf8(w.into_inner()?)?
            }
            Format::Text => match &self.text {
                Some(t) => format!("{t}\n"),
                None => self
                    .rows
                    .iter()
                    .map(|r| r.iter().map(Cell::plain).collect::<Vec<_>>().join("\t") + "\n")
                    .collect(),
            },
            other => anyhow::bail!("{} output is not available for compute", other),
        })
    }
}
