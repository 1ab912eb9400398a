//! Column-oriented output tables: CSV with a `#`-prefixed metadata header
//! and 17 significant digits, plus a JSON mirror of the same columns.

use std::io::Write;
use std::path::Path;

use crate::error::{Result, SalpeterError};

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<(String, Vec<f64>)>,
}

impl Table {
    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |(_, v)| v.len())
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }
}

pub fn write_csv(table: &Table, path: &Path) -> Result<()> {
    let mut out = Vec::new();
    for (k, v) in &table.meta {
        writeln!(out, "# {k}: {v}")?;
    }
    let header: Vec<&str> = table.columns.iter().map(|(n, _)| n.as_str()).collect();
    writeln!(out, "{}", header.join(","))?;
    let rows = table.rows();
    for (name, col) in &table.columns {
        if col.len() != rows {
            return Err(SalpeterError::InvalidArgument(format!(
                "column '{name}' has {} rows, expected {rows}",
                col.len()
            )));
        }
    }
    for i in 0..rows {
        let row: Vec<String> = table
            .columns
            .iter()
            .map(|(_, col)| format!("{:.16e}", col[i]))
            .collect();
        writeln!(out, "{}", row.join(","))?;
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn write_json(table: &Table, path: &Path) -> Result<()> {
    let meta: serde_json::Map<String, serde_json::Value> = table
        .meta
        .iter()
        .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
        .collect();
    let mut columns = serde_json::Map::new();
    for (name, col) in &table.columns {
        columns.insert(
            name.clone(),
            serde_json::Value::Array(
                col.iter()
                    .map(|&v| {
                        serde_json::Number::from_f64(v)
                            .map(serde_json::Value::Number)
                            .unwrap_or(serde_json::Value::Null)
                    })
                    .collect(),
            ),
        );
    }
    let doc = serde_json::json!({
        "metadata": meta,
        "column_order": table.columns.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
        "columns": columns,
    });
    std::fs::write(path, serde_json::to_string_pretty(&doc).expect("json serialization") + "\n")?;
    Ok(())
}

/// Reads back a table written by `write_csv`; exact round trip.
pub fn read_csv(path: &Path) -> Result<Table> {
    let text = std::fs::read_to_string(path)?;
    let mut meta = Vec::new();
    let mut columns: Vec<(String, Vec<f64>)> = Vec::new();
    let mut saw_header = false;
    for (lineno, line) in text.lines().enumerate() {
        let loc = format!("{}:{}", path.display(), lineno + 1);
        if let Some(rest) = line.strip_prefix('#') {
            let (k, v) = rest.split_once(':').ok_or_else(|| SalpeterError::Config {
                location: loc.clone(),
                message: "metadata line without ':'".into(),
            })?;
            meta.push((k.trim().to_string(), v.trim().to_string()));
        } else if !saw_header {
            columns = line
                .split(',')
                .map(|n| (n.trim().to_string(), Vec::new()))
                .collect();
            saw_header = true;
        } else {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != columns.len() {
                return Err(SalpeterError::Config {
                    location: loc,
                    message: format!(
                        "row has {} fields, header has {}",
                        fields.len(),
                        columns.len()
                    ),
                });
            }
            for (slot, field) in columns.iter_mut().zip(fields) {
                let v: f64 = field.trim().parse().map_err(|_| SalpeterError::Config {
                    location: loc.clone(),
                    message: format!("unparseable number '{field}' in column '{}'", slot.0),
                })?;
                slot.1.push(v);
            }
        }
    }
    if !saw_header {
        return Err(SalpeterError::Config {
            location: path.display().to_string(),
            message: "empty file".into(),
        });
    }
    Ok(Table { meta, columns })
}
