//! Output formats. Every command builds a [`Doc`]: a JSON value for
//! `--output json` and a table for `csv` and `table`.

use std::io::Write;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub struct Doc {
    /// Either one JSON document, or one per line for record streams.
    pub json: Vec<Value>,
    pub table: Table,
    /// Free-form lines printed above the table in `table` mode.
    pub notes: Vec<String>,
}

/// Decimal rendering of `num/den` rounded to 12 places.
pub fn decimal(text: &str) -> String {
    match wordprob_core::rational::parse(text) {
        Some(r) => format!("{:.12}", wordprob_core::rational::to_f64(&r)),
        None => String::new(),
    }
}

pub fn emit(doc: &Doc, format: Format, config: &Value, out: &mut impl Write) -> std::io::Result<()> {
    match format {
        Format::Json => {
            for v in &doc.json {
                let mut v = v.clone();
                if let Value::Object(map) = &mut v {
                    map.insert("config".into(), config.clone());
                }
                writeln!(out, "{}", serde_json::to_string(&v).expect("values serialise"))?;
            }
        }
        Format::Csv => {
            writeln!(out, "# config: {}", serde_json::to_string(config).expect("config serialises"))?;
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&doc.table.columns).map_err(std::io::Error::other)?;
            for r in &doc.table.rows {
                w.write_record(r).map_err(std::io::Error::other)?;
            }
            out.write_all(&w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?)?;
        }
        Format::Table => {
            for n in &doc.notes {
                writeln!(out, "{n}")?;
            }
            let t = &doc.table;
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|i| {
                    t.rows
                        .iter()
                        .map(|r| r[i].chars().count())
                        .chain([t.columns[i].chars().count()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |cells: &[String]| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, &w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            writeln!(out, "{}", line(&t.columns))?;
            writeln!(out, "{}", widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().join("  "))?;
            for r in &t.rows {
                writeln!(out, "{}", line(r))?;
            }
        }
    }
    Ok(())
}
