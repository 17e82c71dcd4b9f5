//! Result tables (CSV) and their provenance sidecars (JSON).

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};

/// A float with 17 significant digits, `.` as decimal separator.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// An in-memory CSV table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Table {
        Table {
            name: name.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("utf-8 fields"))
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Provenance of one command run.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentRecord {
    pub command: String,
    pub config: serde_json::Value,
    pub parameters: serde_json::Value,
    pub tables: Vec<String>,
    pub wall_clock_seconds: f64,
    pub version: String,
}

/// Collects the tables of a command and writes them with one sidecar.
pub struct Recorder {
    command: String,
    started: Instant,
    tables: Vec<Table>,
}

impl Recorder {
    pub fn new(command: &str) -> Recorder {
        Recorder {
            command: command.into(),
            started: Instant::now(),
            tables: Vec::new(),
        }
    }

    pub fn add(&mut self, t: Table) {
        self.tables.push(t);
    }

    pub fn tables(&self) -> &[Table] {
        &self.tables
    }

    /// Writes `<table>.csv` files and `<command>.json` into `dir`.
    pub fn write(
        &self,
        dir: &Path,
        config: serde_json::Value,
        parameters: serde_json::Value,
    ) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let mut names = Vec::new();
        for t in &self.tables {
            let file = format!("{}.csv", t.name);
            std::fs::write(dir.join(&file), t.to_csv()?)?;
            names.push(file);
        }
        let rec = ExperimentRecord {
            command: self.command.clone(),
            config,
            parameters,
            tables: names,
            wall_clock_seconds: self.started.elapsed().as_secs_f64(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        };
        let stem = self.command.replace(' ', "_");
        let path = dir.join(format!("{stem}.json"));
        let text = serde_json::to_string_pretty(&rec).map_err(|e| Error::Io(e.to_string()))?;
        std::fs::write(&path, text)?;
        Ok(path)
    }
}
