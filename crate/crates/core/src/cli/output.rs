use crate::error::{Error, Result};
use serde_json::json;
use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Version of the results.csv layout; bump when columns change.
pub const CSV_FORMAT_VERSION: u32 = 1;

/// Provenance columns appended to every results table.
pub const PROVENANCE: [&str; 3] = ["grid", "tolerance", "margin"];

/// Rows of one results table; every value is already formatted.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        let mut cols = columns.to_vec();
        cols.extend_from_slice(&PROVENANCE);
        Table {
            columns: cols,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Shortest round-trip decimal, scientific outside `[1e-4, 1e6)`.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e6).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// What a command produced, before it is written to disk.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub table: Table,
    /// Two-column plot files, by file stem.
    pub plots: Vec<(String, Vec<(f64, f64)>)>,
    pub summary: Vec<String>,
    pub tolerances: BTreeMap<String, f64>,
    /// Optional free-form text written to report.txt.
    pub report: Option<String>,
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Config(format!("cannot write `{}`: {e}", path.display()))
}

pub fn write_csv(path: &Path, command: &str, table: &Table) -> Result<()> {
    let mut buf = Vec::new();
    writeln!(
        buf,
        "# morawetz-lab results v{CSV_FORMAT_VERSION} command={command}"
    )
    .expect("vec write");
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        let err = |e: csv::Error| Error::Config(format!("csv encoding failed: {e}"));
        w.write_record(&table.columns).map_err(err)?;
        for r in &table.rows {
            w.write_record(r).map_err(err)?;
        }
        w.flush().map_err(|e| io_error(path, e))?;
    }
    fs::write(path, buf).map_err(|e| io_error(path, e))
}

pub fn write_dat(path: &Path, columns: (&str, &str), points: &[(f64, f64)]) -> Result<()> {
    let mut s = format!("# {} {}\n", columns.0, columns.1);
    for (x, y) in points {
        s.push_str(&format!("{} {}\n", num(*x), num(*y)));
    }
    fs::write(path, s).map_err(|e| io_error(path, e))
}

/// Writes results.csv, the plot files, report.txt and manifest.json into
/// `dir`; returns the paths written.
pub fn write_all(
    dir: &Path,
    command: &str,
    config: &BTreeMap<String, String>,
    seed: u64,
    outcome: &Outcome,
    wall_seconds: f64,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    let mut written = Vec::new();
    let csv_path = dir.join("results.csv");
    write_csv(&csv_path, command, &outcome.table)?;
    written.push(csv_path);
    for (stem, points) in &outcome.plots {
        let p = dir.join(format!("{stem}.dat"));
        write_dat(&p, ("x", "y"), points)?;
        written.push(p);
    }
    if let Some(text) = &outcome.report {
        let p = dir.join("report.txt");
        fs::write(&p, text).map_err(|e| io_error(&p, e))?;
        written.push(p);
    }
    let manifest = json!({
        "tool": "morawetz-lab",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "seed": seed,
        "config": config,
        "csv_format_version": CSV_FORMAT_VERSION,
        "tolerances": outcome.tolerances,
        "summary": outcome.summary,
        "outputs": written.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect::<Vec<_>>(),
        "wall_time_seconds": wall_seconds,
    });
    let p = dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&p, text + "\n").map_err(|e| io_error(&p, e))?;
    written.push(p);
    Ok(written)
}
