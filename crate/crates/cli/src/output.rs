//! Result files. CSV files start with two `#` lines giving the tool version
//! and the configuration as compact JSON; JSON files carry both as fields.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::args::Format;

pub const TOOL: &str = "blockrig";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

fn render(config: &Json, table: &Table, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Csv => {
            let mut buf = format!("# {TOOL} {VERSION}\n# config {config}\n").into_bytes();
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(&table.columns)?;
            for row in &table.rows {
                w.write_record(row)?;
            }
            w.flush()?;
            drop(w);
            Ok(buf)
        }
        Format::Json => {
            let doc = json!({
                "tool": TOOL,
                "version": VERSION,
                "config": config,
                "columns": table.columns,
                "rows": table.rows,
            });
            let mut buf = serde_json::to_vec_pretty(&doc)?;
            buf.push(b'\n');
            Ok(buf)
        }
    }
}

fn emit(bytes: &[u8], out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

pub fn write_table(config: &Json, table: &Table, format: Format, out: Option<&Path>) -> Result<()> {
    emit(&render(config, table, format)?, out)
}

/// Side artifact (witness, certificate, trace) as JSON under `key`.
pub fn write_artifact(config: &Json, key: &str, payload: &impl Serialize, path: &Path) -> Result<()> {
    let doc = json!({
        "tool": TOOL,
        "version": VERSION,
        "config": config,
        key: payload,
    });
    let mut buf = serde_json::to_vec_pretty(&doc)?;
    buf.push(b'\n');
    emit(&buf, Some(path))
}
