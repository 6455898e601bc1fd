//! CSV and JSON writers for reports and tables.
//!
//! Floats are written in shortest round-trip form, so identical inputs give
//! byte-identical files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::diagnostics::{BaselineComparison, CurvePoint, OrderComparison, SweepTable};
use crate::error::{PlateError, Result};
use crate::report::{Record, RunReport};
use crate::tables::Table;

pub const HISTORY_HEADER: [&str; 6] = ["iteration", "order", "err", "q", "w0_over_h", "wall_ms"];
pub const CURVE_HEADER: [&str; 4] = ["y", "r_over_Ra", "W", "w_over_h"];
pub const SWEEP_HEADER: [&str; 3] = ["c0", "err", "status"];
pub const ORDERS_HEADER: [&str; 4] = ["m", "iteration", "err", "cumulative_wall_ms"];
pub const BASELINE_HEADER: [&str; 6] = ["method", "iteration", "err", "q", "w0_over_h", "wall_ms"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (expected csv|json)")),
        }
    }
}

/// Header row first, then one serialized row per item (header-only when empty).
pub fn write_csv_rows<W: Write, S: Serialize>(out: W, header: &[&str], rows: &[S]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_history_csv<W: Write>(out: W, records: &[Record]) -> Result<()> {
    write_csv_rows(out, &HISTORY_HEADER, records)
}

pub fn write_curve_csv<W: Write>(out: W, points: &[CurvePoint]) -> Result<()> {
    write_csv_rows(out, &CURVE_HEADER, points)
}

pub fn write_sweep_csv<W: Write>(out: W, table: &SweepTable) -> Result<()> {
    let rows: Vec<_> = table
        .rows
        .iter()
        .map(|r| (r.c0, r.err, r.status.as_str()))
        .collect();
    write_csv_rows(out, &SWEEP_HEADER, &rows)
}

pub fn write_orders_csv<W: Write>(out: W, table: &OrderComparison) -> Result<()> {
    write_csv_rows(out, &ORDERS_HEADER, &table.rows)
}

/// Rows tagged `ham_given_a`, `ham_given_q` and `interpolation`, in that order.
pub fn write_baseline_csv<W: Write>(out: W, cmp: &BaselineComparison) -> Result<()> {
    let tagged = |tag: &'static str, records: &[Record]| {
        records
            .iter()
            .map(move |r| (tag, r.iteration, r.err, r.q, r.w0_over_h, r.wall_ms))
            .collect::<Vec<_>>()
    };
    let mut rows = tagged("ham_given_a", &cmp.ham_given_a.records);
    rows.extend(tagged("ham_given_q", &cmp.ham_given_q.records));
    rows.extend(tagged("interpolation", &cmp.baseline.records));
    write_csv_rows(out, &BASELINE_HEADER, &rows)
}

pub fn write_table_csv<W: Write>(out: W, table: &Table) -> Result<()> {
    write_csv_rows(out, &table.header, &table.rows)
}

pub fn write_json<W: Write, S: Serialize>(mut out: W, value: &S) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Writes the convergence history (CSV) or the full report (JSON) to `path`.
pub fn emit_report(report: &RunReport, format: Format, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| {
        PlateError::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })?;
    let mut out = BufWriter::new(file);
    match format {
        Format::Csv => write_history_csv(&mut out, &report.records)?,
        Format::Json => write_json(&mut out, report)?,
    }
    out.flush()?;
    Ok(())
}

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).map_err(|e| {
        PlateError::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })?;
    Ok(BufWriter::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_history_is_header_only() {
        let mut buf = Vec::new();
        write_history_csv(&mut buf, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "iteration,order,err,q,w0_over_h,wall_ms\n"
        );
    }

    #[test]
    fn history_row_format() {
        let rec = Record {
            iteration: 3,
            order: 5,
            err: 1.5e-9,
            q: 132.2,
            w0_over_h: 3.0,
            wall_ms: 0.0,
        };
        let mut buf = Vec::new();
        write_history_csv(&mut buf, &[rec]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(1).unwrap(), "3,5,1.5e-9,132.2,3.0,0.0");
    }

    #[test]
    fn curve_header() {
        let mut buf = Vec::new();
        let pt = CurvePoint {
            y: 1.0,
            r_over_ra: 1.0,
            w: 0.0,
            w_over_h: 0.0,
        };
        write_curve_csv(&mut buf, &[pt]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("y,r_over_Ra,W,w_over_h\n1.0,1.0,0.0,0.0"));
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let report = RunReport {
            config: serde_json::from_str(r#"{"problem":"given_load","value":1.0,"boundary":{"kind":"clamped","lambda":0.0,"mu":2.857142857142857,"nu":0.3},"c1":-0.5,"c2":-0.5,"mode":{"kind":"series","order":1},"stop":{"tol":1e-12,"max_iter":500,"divergence":1e8},"grid_k":100,"precision":"double"}"#).unwrap(),
            records: vec![],
            phi: vec![0.0],
            s: vec![0.0],
            status: crate::report::Status::MaxIter,
        };
        let err = emit_report(
            &report,
            Format::Json,
            Path::new("/nonexistent-dir/x/report.json"),
        )
        .unwrap_err();
        assert!(matches!(err, PlateError::Io(_)));
    }
}
