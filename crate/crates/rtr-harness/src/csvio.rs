//! Per-iteration CSV emission and strict re-reading.
//!
//! One CSV file per run, one row per outer iteration, fixed column
//! order. Floats are written with Rust's shortest round-trip formatting
//! (an undefined acceptance ratio prints as `NaN`), `accepted` is `0`
//! or `1`, and `stop_reason` is `RES` or `OOB`. `delta` is the radius
//! in force while iteration `k` ran, i.e. before the update. Because
//! everything upstream is deterministic, rerunning a spec reproduces
//! each file byte for byte.

use std::io::Write as _;
use std::path::Path;

use rtr_solver::{IterationRecord, StopReason};

use crate::error::HarnessError;

/// Exact header line of every run CSV.
pub const CSV_HEADER: &str = "run_id,variant,k,f,grad_norm,rho,theta,accepted,\
stop_reason,delta,xi_norm,inner_iters,hvp_cum,f_cum,grad_cum,wall_ms";

/// One parsed CSV row; field meanings match [`IterationRecord`].
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub run_id: String,
    pub variant: String,
    pub k: usize,
    pub f: f64,
    pub grad_norm: f64,
    pub rho: f64,
    pub theta: f64,
    pub accepted: bool,
    pub stop_reason: StopReason,
    pub delta: f64,
    pub xi_norm: f64,
    pub inner_iters: usize,
    pub hvp_cum: u64,
    pub f_cum: u64,
    pub grad_cum: u64,
    pub wall_ms: f64,
}

fn format_row(run_id: &str, variant: &str, r: &IterationRecord) -> String {
    format!(
        "{run_id},{variant},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        r.k,
        r.f_value,
        r.grad_norm,
        r.rho,
        r.theta,
        u8::from(r.accepted),
        r.stop_reason,
        r.delta_before,
        r.xi_norm,
        r.inner_iters,
        r.hvp_cum,
        r.f_cum,
        r.grad_cum,
        r.wall_ms,
    )
}

/// Renders a run's records as CSV text (header plus one line per
/// iteration, `\n` separators, trailing newline).
pub fn render_csv(run_id: &str, variant: &str, records: &[IterationRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for record in records {
        out.push_str(&format_row(run_id, variant, record));
        out.push('\n');
    }
    out
}

/// Writes a run's records to `path` as CSV.
pub fn emit_csv(
    path: &Path,
    run_id: &str,
    variant: &str,
    records: &[IterationRecord],
) -> Result<(), HarnessError> {
    let text = render_csv(run_id, variant, records);
    let mut file = std::fs::File::create(path)
        .map_err(|e| HarnessError::io(path.display().to_string(), e))?;
    file.write_all(text.as_bytes())
        .map_err(|e| HarnessError::io(path.display().to_string(), e))?;
    Ok(())
}

fn parse_field<T: std::str::FromStr>(
    path: &Path,
    line_no: usize,
    name: &str,
    raw: &str,
) -> Result<T, HarnessError> {
    raw.parse::<T>().map_err(|_| {
        HarnessError::Invariant(format!(
            "{}:{line_no}: bad value `{raw}` for column {name}",
            path.display()
        ))
    })
}

/// Reads a run CSV back, enforcing the exact header and field formats.
///
/// This is the harness's own reader — it exists so tests and the
/// diagnostics pass can consume emitted files without a second format
/// definition, and it rejects anything [`emit_csv`] would not have
/// written.
pub fn read_run_csv(path: &Path) -> Result<Vec<CsvRow>, HarnessError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| HarnessError::io(path.display().to_string(), e))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        Some((_, header)) => {
            return Err(HarnessError::Invariant(format!(
                "{}: unexpected CSV header `{header}`",
                path.display()
            )))
        }
        None => {
            return Err(HarnessError::Invariant(format!(
                "{}: empty CSV file",
                path.display()
            )))
        }
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 16 {
            return Err(HarnessError::Invariant(format!(
                "{}:{line_no}: expected 16 fields, got {}",
                path.display(),
                fields.len()
            )));
        }
        let accepted = match fields[7] {
            "0" => false,
            "1" => true,
            other => {
                return Err(HarnessError::Invariant(format!(
                    "{}:{line_no}: accepted must be 0 or 1, got `{other}`",
                    path.display()
                )))
            }
        };
        let stop_reason = match fields[8] {
            "RES" => StopReason::Residual,
            "OOB" => StopReason::Boundary,
            other => {
                return Err(HarnessError::Invariant(format!(
                    "{}:{line_no}: stop_reason must be RES or OOB, got `{other}`",
                    path.display()
                )))
            }
        };
        rows.push(CsvRow {
            run_id: fields[0].to_string(),
            variant: fields[1].to_string(),
            k: parse_field(path, line_no, "k", fields[2])?,
            f: parse_field(path, line_no, "f", fields[3])?,
            grad_norm: parse_field(path, line_no, "grad_norm", fields[4])?,
            rho: parse_field(path, line_no, "rho", fields[5])?,
            theta: parse_field(path, line_no, "theta", fields[6])?,
            accepted,
            stop_reason,
            delta: parse_field(path, line_no, "delta", fields[9])?,
            xi_norm: parse_field(path, line_no, "xi_norm", fields[10])?,
            inner_iters: parse_field(path, line_no, "inner_iters", fields[11])?,
            hvp_cum: parse_field(path, line_no, "hvp_cum", fields[12])?,
            f_cum: parse_field(path, line_no, "f_cum", fields[13])?,
            grad_cum: parse_field(path, line_no, "grad_cum", fields[14])?,
            wall_ms: parse_field(path, line_no, "wall_ms", fields[15])?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(k: usize, rho: f64) -> IterationRecord {
        IterationRecord {
            k,
            f_value: 1.25 + k as f64,
            grad_norm: 0.5,
            rho,
            theta: 1e-17,
            accepted: rho >= 0.1,
            stop_reason: if k % 2 == 0 {
                StopReason::Residual
            } else {
                StopReason::Boundary
            },
            delta_before: 1.0,
            delta_after: 0.25,
            inner_iters: 3,
            hvp_cum: 4 * (k as u64 + 1),
            f_cum: k as u64 + 1,
            grad_cum: k as u64 + 1,
            xi_norm: 1e-6,
            model_decrease: 1e-3,
            wall_ms: 0.125,
            xi_curvature: 0.0,
            r0_norm: 0.5,
        }
    }

    #[test]
    fn rows_round_trip_bit_for_bit_including_nan_ratios() {
        let records = vec![record(0, 0.993), record(1, f64::NAN)];
        let dir = std::env::temp_dir().join(format!("rtr-csv-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("roundtrip.csv");
        emit_csv(&path, "demo-s0", "bg", &records).unwrap();

        let rows = read_run_csv(&path).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].run_id, "demo-s0");
        assert_eq!(rows[0].rho.to_bits(), 0.993f64.to_bits());
        assert!(rows[1].rho.is_nan());
        assert_eq!(rows[1].stop_reason, StopReason::Boundary);
        assert!(!rows[1].accepted);
        assert_eq!(rows[0].f.to_bits(), 1.25f64.to_bits());

        // Emitting the same records again reproduces the bytes.
        let again = render_csv("demo-s0", "bg", &records);
        assert_eq!(std::fs::read_to_string(&path).unwrap(), again);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn the_reader_rejects_foreign_headers_and_malformed_fields() {
        let dir = std::env::temp_dir().join(format!("rtr-csv-bad-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();

        let bad_header = dir.join("bad_header.csv");
        std::fs::write(&bad_header, "a,b,c\n").unwrap();
        let err = read_run_csv(&bad_header).unwrap_err();
        assert!(err.to_string().contains("unexpected CSV header"), "{err}");

        let bad_row = dir.join("bad_row.csv");
        std::fs::write(&bad_row, format!("{CSV_HEADER}\nx,y,0\n")).unwrap();
        let err = read_run_csv(&bad_row).unwrap_err();
        assert!(err.to_string().contains("expected 16 fields"), "{err}");

        std::fs::remove_dir_all(&dir).unwrap();
    }
}
