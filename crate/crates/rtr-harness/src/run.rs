//! Batched experiment execution.
//!
//! An experiment expands into `reps × variants` runs. Repetition `r`
//! uses seed `base_seed + r` for both the starting point and the
//! solver's perturbation stream; every variant of a repetition sees the
//! same problem instance and the same starting point. Problem builders
//! are deterministic, so workers rebuild their own instance from the
//! spec instead of sharing one across threads — the rebuilt instance is
//! bitwise-identical, which keeps runs independent without locking.
//!
//! Oracle faults (non-finite values surfacing mid-run) are recorded as
//! per-run failures and the remaining runs continue; anything else —
//! bad configuration, dimension bugs — aborts the batch.

use std::path::Path;

use rayon::prelude::*;
use rtr_problems::ProblemInstance;
use rtr_solver::{tr_run, RunReport, SolverError};

use crate::csvio;
use crate::error::HarnessError;
use crate::spec::{ExperimentSpec, X0Rule};
use crate::summary::{write_summary, RunSummary};

/// One completed run.
#[derive(Debug)]
pub struct RunOutput {
    /// `"{label}-s{seed}"`; names the CSV file and the summary entry.
    pub run_id: String,
    /// Variant label from the spec.
    pub variant: String,
    /// Repetition index, `0..reps`.
    pub rep: usize,
    /// Seed used for this repetition (`base_seed + rep`).
    pub seed: u64,
    /// The solver's full report.
    pub report: RunReport,
}

/// One run that failed with an oracle fault.
#[derive(Debug)]
pub struct RunFailure {
    pub run_id: String,
    pub variant: String,
    pub rep: usize,
    pub seed: u64,
    /// Human-readable fault description.
    pub error: String,
}

/// Everything an experiment produced, in (repetition, variant) order.
#[derive(Debug)]
pub struct RunBatch {
    pub outputs: Vec<RunOutput>,
    pub failures: Vec<RunFailure>,
}

impl RunBatch {
    /// Total planned runs (completed plus failed).
    pub fn total(&self) -> usize {
        self.outputs.len() + self.failures.len()
    }
}

/// Composes the run identifier used in file names and CSV rows.
pub fn run_id(label: &str, seed: u64) -> String {
    format!("{label}-s{seed}")
}

enum JobResult {
    Done(RunOutput),
    Faulted(RunFailure),
}

fn execute_job(
    spec: &ExperimentSpec,
    rep: usize,
    variant_idx: usize,
) -> Result<JobResult, HarnessError> {
    let seed = spec.base_seed + rep as u64;
    let variant = &spec.variants[variant_idx];
    let id = run_id(&variant.label, seed);

    // The gradient-descent warm start spends oracle calls; derive it on
    // a scratch instance so the run's counters start at zero.
    let instance = spec.problem.build()?;
    let (instance, x0) = if matches!(spec.x0, X0Rule::GdWarmstart { .. }) {
        let x0 = spec.derive_x0(&instance, seed)?;
        (spec.problem.build()?, x0)
    } else {
        let x0 = spec.derive_x0(&instance, seed)?;
        (instance, x0)
    };

    let mut config = variant.config.clone();
    config.seed = seed;
    match tr_run(&instance.oracle, x0, &config) {
        Ok(report) => Ok(JobResult::Done(RunOutput {
            run_id: id,
            variant: variant.label.clone(),
            rep,
            seed,
            report,
        })),
        Err(SolverError::Core(fault)) => Ok(JobResult::Faulted(RunFailure {
            run_id: id,
            variant: variant.label.clone(),
            rep,
            seed,
            error: fault.to_string(),
        })),
        Err(other) => Err(other.into()),
    }
}

/// Runs every (repetition, variant) pair of the experiment in memory.
///
/// Deterministic given the spec: outputs come back in (repetition,
/// variant) order with reproducible trajectories. Runs execute
/// concurrently; each builds its own problem instance.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<RunBatch, HarnessError> {
    let jobs: Vec<(usize, usize)> = (0..spec.reps)
        .flat_map(|rep| (0..spec.variants.len()).map(move |v| (rep, v)))
        .collect();
    let results: Vec<JobResult> = jobs
        .par_iter()
        .map(|&(rep, v)| execute_job(spec, rep, v))
        .collect::<Result<_, _>>()?;

    let mut batch = RunBatch {
        outputs: Vec::new(),
        failures: Vec::new(),
    };
    for result in results {
        match result {
            JobResult::Done(output) => batch.outputs.push(output),
            JobResult::Faulted(failure) => batch.failures.push(failure),
        }
    }
    Ok(batch)
}

/// Runs the experiment and writes one CSV per run plus `summary.json`
/// into `out_dir` (created if missing). Returns the batch for callers
/// that keep going (the CLI prints a table from it).
pub fn run_experiment_to_dir(
    spec: &ExperimentSpec,
    out_dir: &Path,
) -> Result<RunBatch, HarnessError> {
    let batch = run_experiment(spec)?;
    std::fs::create_dir_all(out_dir)
        .map_err(|e| HarnessError::io(out_dir.display().to_string(), e))?;

    let mut summaries = Vec::with_capacity(batch.total());
    for output in &batch.outputs {
        let csv_name = format!("{}.csv", output.run_id);
        csvio::emit_csv(
            &out_dir.join(&csv_name),
            &output.run_id,
            &output.variant,
            &output.report.records,
        )?;
        summaries.push(RunSummary::from_output(spec, output, &csv_name));
    }
    for failure in &batch.failures {
        summaries.push(RunSummary::from_failure(spec, failure));
    }
    summaries.sort_by(|a, b| (a.rep, &a.variant).cmp(&(b.rep, &b.variant)));
    write_summary(&out_dir.join("summary.json"), &summaries)?;
    Ok(batch)
}

/// Builds the instance and starting point exactly as `run_experiment`
/// does for repetition `rep` — shared by the diagnostics path, which
/// needs the problem's constants but not a new run.
pub fn instantiate(
    spec: &ExperimentSpec,
    rep: usize,
) -> Result<(ProblemInstance, u64), HarnessError> {
    let seed = spec.base_seed + rep as u64;
    Ok((spec.problem.build()?, seed))
}
