//! Verification report serialization (CSV and JSON, schema v1).
//!
//! Columns, in order:
//!
//! ```text
//! schema,ring,card_r,card_m,form,det,det_class,disc_class,theoretical_s,
//! brute_force_s,match,witness_size,inclusion_maximal,node_count,elapsed_ms
//! ```
//!
//! `schema` is always `v1`. `elapsed_ms` is left empty (JSON `null`) unless
//! timings are requested, so reports of a sequential run are reproducible
//! byte for byte.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::Format;
use crate::error::{Error, Result};
use crate::orthoset::{VerificationReport, VerificationRow};
use crate::ring::SquareTag;

pub const SCHEMA_VERSION: &str = "v1";

#[derive(Debug, Serialize)]
struct Row<'a> {
    schema: &'static str,
    ring: &'a str,
    card_r: u64,
    card_m: u64,
    form: &'a str,
    det: &'a str,
    det_class: SquareTag,
    disc_class: SquareTag,
    theoretical_s: u64,
    brute_force_s: u64,
    #[serde(rename = "match")]
    matches: bool,
    witness_size: u64,
    inclusion_maximal: bool,
    node_count: u64,
    elapsed_ms: Option<u128>,
}

impl<'a> Row<'a> {
    fn new(r: &'a VerificationRow, timings: bool) -> Self {
        Row {
            schema: SCHEMA_VERSION,
            ring: &r.ring,
            card_r: r.card_r,
            card_m: r.card_m,
            form: &r.form,
            det: &r.det,
            det_class: r.det_class,
            disc_class: r.disc_class,
            theoretical_s: r.theoretical_s,
            brute_force_s: r.brute_force_s,
            matches: r.matches,
            witness_size: r.witness_size,
            inclusion_maximal: r.inclusion_maximal,
            node_count: r.node_count,
            elapsed_ms: timings.then_some(r.elapsed.as_millis()),
        }
    }
}

/// Sorts rows by (ring label, form label); the sort is stable.
pub fn order_rows(report: &mut VerificationReport) {
    report.rows.sort_by(|a, b| (&a.ring, &a.form).cmp(&(&b.ring, &b.form)));
}

pub fn render(report: &VerificationReport, format: Format, timings: bool) -> Result<Vec<u8>> {
    let rows: Vec<Row> = report.rows.iter().map(|r| Row::new(r, timings)).collect();
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            if rows.is_empty() {
                w.write_record([
                    "schema",
                    "ring",
                    "card_r",
                    "card_m",
                    "form",
                    "det",
                    "det_class",
                    "disc_class",
                    "theoretical_s",
                    "brute_force_s",
                    "match",
                    "witness_size",
                    "inclusion_maximal",
                    "node_count",
                    "elapsed_ms",
                ])
                .map_err(io_error)?;
            }
            for row in &rows {
                w.serialize(row).map_err(io_error)?;
            }
            w.into_inner().map_err(|e| Error::Internal(e.to_string()))
        }
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(&rows).map_err(|e| Error::Internal(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

fn io_error(e: impl std::fmt::Display) -> Error {
    Error::Internal(format!("report serialization failed: {e}"))
}

/// Writes `bytes` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("report");
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}
