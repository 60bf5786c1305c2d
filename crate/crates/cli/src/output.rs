//! Tables, CSV files and metadata sidecars.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde_json::{Map, Value as Json};

use crate::plot::{self, Plot};

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(i) => Some(*i as f64),
            Cell::Float(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(i) => write!(f, "{i}"),
            // 17 significant digits round-trips every f64.
            Cell::Float(x) => write!(f, "{x:.16e}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| *h == name)
    }

    /// Numeric column by name; `None` if absent or not numeric.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        self.rows.iter().map(|r| r[i].as_f64()).collect()
    }

    pub fn text_column(&self, name: &str) -> Option<Vec<String>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i].to_string()).collect())
    }
}

/// A table plus how to draw it and any metadata worth keeping next to it.
#[derive(Debug, Clone)]
pub struct Dataset {
    /// File stem: `<name>.csv`, `<name>.svg`, `<name>.json`.
    pub name: &'static str,
    pub table: Table,
    pub plot: Plot,
    pub meta: Map<String, Json>,
}

/// Everything one subcommand produces.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub datasets: Vec<Dataset>,
    /// Extra plain-text files, `(file name, contents)`.
    pub texts: Vec<(String, String)>,
}

impl Report {
    pub fn dataset(&self, name: &str) -> Option<&Dataset> {
        self.datasets.iter().find(|d| d.name == name)
    }
}

pub fn write_csv(path: &Path, table: &Table) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|c| c.to_string()))?;
    }
    w.flush().with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Writes every file of `report` under `dir`, creating it if needed.
/// Returns the paths written, in order.
pub fn write_report(dir: &Path, report: &Report, common: &Map<String, Json>) -> anyhow::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))?;
    let mut written = Vec::new();
    for ds in &report.datasets {
        let csv_path = dir.join(format!("{}.csv", ds.name));
        write_csv(&csv_path, &ds.table)?;
        written.push(csv_path);

        let mut meta = common.clone();
        meta.extend(ds.meta.clone());
        let json_path = dir.join(format!("{}.json", ds.name));
        let text = serde_json::to_string_pretty(&Json::Object(meta))?;
        fs::write(&json_path, text + "\n").with_context(|| format!("writing {}", json_path.display()))?;
        written.push(json_path);

        let svg_path = dir.join(format!("{}.svg", ds.name));
        plot::render(&svg_path, &ds.table, &ds.plot).with_context(|| format!("plotting {}", svg_path.display()))?;
        written.push(svg_path);
    }
    for (name, contents) in &report.texts {
        let path = dir.join(name);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        written.push(path);
    }
    Ok(written)
}
