//! Machine-readable run summaries (`summary.json`).
//!
//! One JSON object per run, all runs of an experiment in one array —
//! the compact companion to the per-iteration CSVs. `csv_path` is the
//! bare file name of the run's CSV, resolved relative to the JSON
//! file's own directory, so an output directory can be moved wholesale.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::HarnessError;
use crate::run::{RunFailure, RunOutput};
use crate::spec::ExperimentSpec;

/// Summary of one run. Failed runs keep the identifying fields and the
/// fault text; the result fields stay `null`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub run_id: String,
    pub variant: String,
    pub rep: usize,
    pub seed: u64,
    /// Problem descriptor, e.g. `sine_saddle(d = 100000, seed = 0)`.
    pub problem: String,
    /// Dimension of the optimization variable.
    pub dim: usize,
    /// Starting-point rule, e.g. `near_saddle(offset = 0.001)`.
    pub x0_rule: String,
    /// `"ok"` or `"failed"`.
    pub status: String,
    /// `GRAD_TOL` or `MAX_OUTER` for completed runs.
    pub terminated_by: Option<String>,
    pub outer_iterations: Option<usize>,
    pub final_f: Option<f64>,
    pub final_grad_norm: Option<f64>,
    pub n_f: Option<u64>,
    pub n_grad: Option<u64>,
    pub n_hvp: Option<u64>,
    pub wall_time_ms: Option<f64>,
    pub final_point_digest: Option<String>,
    /// Bare CSV file name, relative to this JSON file's directory.
    pub csv_path: Option<String>,
    /// Oracle-fault description for failed runs.
    pub error: Option<String>,
}

impl RunSummary {
    /// Summarizes a completed run.
    pub fn from_output(spec: &ExperimentSpec, output: &RunOutput, csv_name: &str) -> Self {
        let report = &output.report;
        RunSummary {
            run_id: output.run_id.clone(),
            variant: output.variant.clone(),
            rep: output.rep,
            seed: output.seed,
            problem: spec.problem.to_string(),
            dim: spec.problem.dim(),
            x0_rule: spec.x0.to_string(),
            status: "ok".to_string(),
            terminated_by: Some(report.terminated_by.to_string()),
            outer_iterations: Some(report.records.len()),
            final_f: Some(report.final_f),
            final_grad_norm: Some(report.final_grad_norm),
            n_f: Some(report.totals.n_f),
            n_grad: Some(report.totals.n_grad),
            n_hvp: Some(report.totals.n_hvp),
            wall_time_ms: Some(report.wall_time_ms),
            final_point_digest: Some(report.final_point_digest.clone()),
            csv_path: Some(csv_name.to_string()),
            error: None,
        }
    }

    /// Summarizes a run that died on an oracle fault.
    pub fn from_failure(spec: &ExperimentSpec, failure: &RunFailure) -> Self {
        RunSummary {
            run_id: failure.run_id.clone(),
            variant: failure.variant.clone(),
            rep: failure.rep,
            seed: failure.seed,
            problem: spec.problem.to_string(),
            dim: spec.problem.dim(),
            x0_rule: spec.x0.to_string(),
            status: "failed".to_string(),
            terminated_by: None,
            outer_iterations: None,
            final_f: None,
            final_grad_norm: None,
            n_f: None,
            n_grad: None,
            n_hvp: None,
            wall_time_ms: None,
            final_point_digest: None,
            csv_path: None,
            error: Some(failure.error.clone()),
        }
    }
}

/// Writes the summary array as pretty-printed JSON.
pub fn write_summary(path: &Path, summaries: &[RunSummary]) -> Result<(), HarnessError> {
    let mut text = serde_json::to_string_pretty(summaries)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| HarnessError::io(path.display().to_string(), e))
}

/// Reads a summary array back.
pub fn read_summary(path: &Path) -> Result<Vec<RunSummary>, HarnessError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| HarnessError::io(path.display().to_string(), e))?;
    Ok(serde_json::from_str(&text)?)
}
