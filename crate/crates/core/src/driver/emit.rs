use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::config::OutputFormat;
use super::report::{CheckResult, Report};

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("cannot write report to {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

/// Writes `report` to `destination`, or to stdout when none is given.
pub fn emit(report: &Report, format: OutputFormat, destination: Option<&Path>) -> Result<(), EmitError> {
    let path = destination.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf);
    let io_err = |source| EmitError::Io { path: path.clone(), source };
    let mut sink: Box<dyn Write> = match destination {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(io_err)?)),
        None => Box::new(io::stdout().lock()),
    };
    let bytes = render(report, format)?;
    sink.write_all(&bytes).map_err(io_err)?;
    sink.flush().map_err(io_err)
}

pub fn render(report: &Report, format: OutputFormat) -> Result<Vec<u8>, EmitError> {
    Ok(match format {
        OutputFormat::Json => {
            let mut s = report.to_json();
            s.push('\n');
            s.into_bytes()
        }
        OutputFormat::Csv => render_csv(report)?,
        OutputFormat::Text => render_text(report).into_bytes(),
    })
}

fn witness_cells(r: &CheckResult) -> (usize, String) {
    let mut cells: Vec<String> = r
        .reports
        .iter()
        .flat_map(|rep| rep.witnesses.iter())
        .map(|w| serde_json::to_string(w).expect("witness serializes"))
        .collect();
    if let Some(w) = r.certificate.as_ref().and_then(|c| c.witness.as_ref()) {
        cells.push(serde_json::to_string(w).expect("witness serializes"));
    }
    if let Some(w) = r.elasticity.as_ref().and_then(|e| e.witness.as_ref()) {
        cells.push(serde_json::to_string(w).expect("witness serializes"));
    }
    (cells.len(), cells.join("; "))
}

fn render_csv(report: &Report) -> Result<Vec<u8>, EmitError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["d", "f", "check", "status", "bound", "summary", "witness_count", "witnesses"])?;
    for r in &report.results {
        let (count, witnesses) = witness_cells(r);
        w.write_record([
            r.order.d.to_string(),
            r.order.f.to_string(),
            r.check.to_string(),
            r.status.to_string(),
            r.bound.to_string(),
            r.summary.clone(),
            count.to_string(),
            witnesses,
        ])?;
    }
    w.into_inner().map_err(|e| EmitError::Io { path: "<buffer>".into(), source: e.into_error() })
}

fn render_text(report: &Report) -> String {
    let header = ["d", "f", "check", "status", "bound", "summary"];
    let rows: Vec<[String; 6]> = report
        .results
        .iter()
        .map(|r| {
            [
                r.order.d.to_string(),
                r.order.f.to_string(),
                r.check.to_string(),
                r.status.to_string(),
                r.bound.to_string(),
                r.summary.clone(),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let mut s = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i + 1 == cells.len() {
                s.push_str(cell);
            } else {
                s.push_str(&format!("{cell:<w$}  ", w = widths[i]));
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(&header.map(String::from));
    out.push_str(&line(&widths.map(|w| "-".repeat(w))));
    for row in &rows {
        out.push_str(&line(row));
    }
    out.push_str(&format!(
        "\noverall: {}  ({} checks, {} jobs, {:.2}s)\n",
        report.overall_status,
        report.results.len(),
        report.unstable.jobs,
        report.unstable.total_seconds
    ));
    out
}
