//! CSV / JSON serialization of sweep rows.
//!
//! Column order: `family,m,n,gamma,witness,l,value,nonclassical,provenance,discrepancy,cutoff,error`.
//! Floats use the shortest decimal that round-trips, so identical inputs
//! give byte-identical files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{Format, Metadata, Row};
use crate::error::Result;

pub const CSV_HEADER: &str = "family,m,n,gamma,witness,l,value,nonclassical,provenance,discrepancy,cutoff,error";

fn float(x: f64) -> String {
    format!("{x:?}")
}

fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.family,
            r.m,
            r.n,
            float(r.gamma),
            r.witness,
            r.l,
            opt(r.value, float),
            opt(r.nonclassical, |b| b.to_string()),
            r.provenance,
            opt(r.discrepancy, float),
            opt(r.cutoff, |c| c.to_string()),
            r.error.unwrap_or(""),
        );
    }
    out
}

pub fn to_json(rows: &[Row]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

pub fn render(rows: &[Row], format: Format) -> String {
    match format {
        Format::Csv => to_csv(rows),
        Format::Json => to_json(rows),
    }
}

/// Sidecar path for metadata: `<out>.meta.json`.
pub fn metadata_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".meta.json");
    out.with_file_name(name)
}

/// Write rows to `out` and metadata next to it.
pub fn write(out: &Path, rows: &[Row], metadata: &Metadata, format: Format) -> Result<()> {
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(out, render(rows, format))?;
    let meta = serde_json::to_string_pretty(metadata).expect("metadata serializes");
    std::fs::write(metadata_path(out), meta + "\n")?;
    Ok(())
}
