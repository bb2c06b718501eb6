//! The `rtr` command-line interface.
//!
//! Four subcommands: `run` executes a spec file and writes CSVs plus
//! `summary.json`; `diagnose` replays a summary against the a-priori
//! bounds; `adversary` drives the query-budgeted lower-bound
//! construction and prints its certificate; `selftest` runs the smoke
//! battery. Exit codes: 0 success, 1 argument or spec error, 2
//! invariant violation, 3 I/O error.

use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use rtr_adversary::{run_adversary_experiment, WrappedTrustRegion};

use crate::diagnose::{diagnose_bounds, DEFAULT_CONFIDENCE};
use crate::error::HarnessError;
use crate::run::run_experiment_to_dir;
use crate::selftest::run_selftest;
use crate::spec::ExperimentSpec;
use crate::summary::read_summary;
use crate::csvio;

/// Environment variable holding the default output root for `run`.
pub const OUT_DIR_ENV: &str = "RTR_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "rtr",
    version,
    about = "Trust-region experiment runner and diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every (repetition, variant) pair of an experiment spec.
    Run {
        /// Path to the spec file.
        spec: PathBuf,
        /// Output directory (overrides the spec and the environment).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Base seed (overrides the spec).
        #[arg(long)]
        seed: Option<u64>,
        /// Repetition count (overrides the spec).
        #[arg(long)]
        reps: Option<usize>,
    },
    /// Compare finished runs against the a-priori complexity bounds.
    Diagnose {
        /// Path to the spec file the runs came from.
        spec: PathBuf,
        /// Path to the summary.json the run command wrote.
        report: PathBuf,
    },
    /// Drive the resisting-oracle adversary and print its certificate.
    Adversary {
        /// Query budget for the deterministic solver.
        #[arg(long)]
        queries: usize,
        /// Ambient dimension (must be at least 2 * queries + 1).
        #[arg(long)]
        dim: usize,
    },
    /// Run the end-to-end smoke battery at small dimensions.
    Selftest,
}

/// Parses arguments and dispatches; returns the process exit code.
pub fn cli_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            err.print().expect("writing to stdout/stderr");
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), HarnessError> {
    match cli.cmd {
        Cmd::Run { spec, out, seed, reps } => cmd_run(&spec, out, seed, reps),
        Cmd::Diagnose { spec, report } => cmd_diagnose(&spec, &report),
        Cmd::Adversary { queries, dim } => cmd_adversary(queries, dim),
        Cmd::Selftest => run_selftest(),
    }
}

/// Output directory priority: `--out`, then the spec's `out` key, then
/// `$RTR_OUT_DIR/<spec-stem>`, then `./<spec-stem>-out`.
fn resolve_out_dir(spec_path: &Path, spec: &ExperimentSpec, flag: Option<PathBuf>) -> PathBuf {
    if let Some(dir) = flag {
        return dir;
    }
    if let Some(dir) = &spec.out_dir {
        return dir.clone();
    }
    let stem = spec_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "experiment".to_string());
    match std::env::var_os(OUT_DIR_ENV) {
        Some(root) => PathBuf::from(root).join(stem),
        None => PathBuf::from(format!("{stem}-out")),
    }
}

fn cmd_run(
    spec_path: &Path,
    out: Option<PathBuf>,
    seed: Option<u64>,
    reps: Option<usize>,
) -> Result<(), HarnessError> {
    let mut spec = ExperimentSpec::load(spec_path)?;
    if let Some(seed) = seed {
        spec.base_seed = seed;
    }
    if let Some(reps) = reps {
        if reps == 0 {
            return Err(HarnessError::InvalidSpec("--reps must be at least 1".into()));
        }
        spec.reps = reps;
    }
    let out_dir = resolve_out_dir(spec_path, &spec, out);

    println!(
        "running {} on {} (x0 = {}, reps = {}, base seed = {})",
        plural(spec.variants.len(), "variant"),
        spec.problem,
        spec.x0,
        spec.reps,
        spec.base_seed
    );
    let batch = run_experiment_to_dir(&spec, &out_dir)?;
    for output in &batch.outputs {
        let report = &output.report;
        println!(
            "  {}: {} after {} outer iterations, f = {}, |g| = {}, hvp = {}",
            output.run_id,
            report.terminated_by,
            report.records.len(),
            report.final_f,
            report.final_grad_norm,
            report.totals.n_hvp
        );
    }
    for failure in &batch.failures {
        println!("  {}: FAILED — {}", failure.run_id, failure.error);
    }
    println!("wrote {} into {}", plural(batch.outputs.len(), "CSV file"), out_dir.display());

    if batch.outputs.is_empty() {
        return Err(HarnessError::Invariant(
            "every run in the batch failed with an oracle fault".into(),
        ));
    }
    Ok(())
}

fn plural(n: usize, noun: &str) -> String {
    if n == 1 {
        format!("{n} {noun}")
    } else {
        format!("{n} {noun}s")
    }
}

fn cmd_diagnose(spec_path: &Path, report_path: &Path) -> Result<(), HarnessError> {
    let spec = ExperimentSpec::load(spec_path)?;
    let summaries = read_summary(report_path)?;
    let base = report_path.parent().unwrap_or_else(|| Path::new("."));

    let mut hard_failure = false;
    for summary in &summaries {
        if summary.status != "ok" {
            println!(
                "run {} / variant {}: skipped ({})",
                summary.run_id,
                summary.variant,
                summary.error.as_deref().unwrap_or("failed")
            );
            continue;
        }
        let csv_name = summary.csv_path.as_deref().ok_or_else(|| {
            HarnessError::Invariant(format!(
                "summary entry {} is ok but has no csv_path",
                summary.run_id
            ))
        })?;
        let rows = csvio::read_run_csv(&base.join(csv_name))?;
        let report = diagnose_bounds(&spec, summary, &rows, DEFAULT_CONFIDENCE)?;
        print!("{report}");
        hard_failure |= report.has_hard_failure();
    }
    if hard_failure {
        return Err(HarnessError::Invariant(
            "a structural bound check failed; see the report above".into(),
        ));
    }
    Ok(())
}

fn cmd_adversary(queries: usize, dim: usize) -> Result<(), HarnessError> {
    let mut solver = WrappedTrustRegion::baseline();
    let report = run_adversary_experiment(&mut solver, queries, dim)?;
    println!("adversary certificate (dim = {}, budget = {}):", report.dim, report.budget);
    println!(
        "  queries made: {}{}",
        report.queries_made,
        if report.truncated { " (budget exhausted)" } else { "" }
    );
    println!("  span dimension after the game: {}", report.span_dim);
    println!("  best value the solver ever saw: {}", report.min_queried_value);
    println!(
        "  revealed function: minimum {} at radius {}",
        report.revealed_min_value, report.revealed_minimizer_norm
    );
    match report.escape_iterations {
        Some(k) => println!(
            "  randomized rerun on the revealed function: f <= {} after {} outer iterations \
             (final f = {})",
            report.escape_threshold, k, report.escape_final_f
        ),
        None => println!(
            "  randomized rerun on the revealed function: did not reach f <= {} (final f = {})",
            report.escape_threshold, report.escape_final_f
        ),
    }
    Ok(())
}
