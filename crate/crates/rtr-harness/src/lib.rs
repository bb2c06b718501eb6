//! Experiment harness: spec files, batched runs, CSV/JSON emission,
//! bound diagnostics, and the `rtr` command-line entry point.
//!
//! The harness turns a text spec — one problem, one starting-point rule,
//! several labeled solver variants — into a deterministic batch of runs.
//! Every variant of a repetition shares the same problem instance and
//! the same starting point, so per-iteration traces are directly
//! comparable across variants. Outputs are one CSV per run plus a JSON
//! summary, and a diagnostics pass compares observed iteration and
//! oracle-call counts against the a-priori bounds wherever the problem
//! ships the constants those bounds need.

pub mod cli;
pub mod csvio;
pub mod diagnose;
pub mod error;
pub mod run;
pub mod selftest;
pub mod spec;
pub mod stats;
pub mod summary;

pub use cli::cli_main;
pub use error::HarnessError;
pub use spec::{ExperimentSpec, ProblemSpec, VariantSpec, X0Rule, SQRT_EPS_M, X0_RNG_STREAM};
