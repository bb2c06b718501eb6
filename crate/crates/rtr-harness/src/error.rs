//! Error type and process exit codes for the harness.

use rtr_adversary::AdversaryError;
use rtr_core::CoreError;
use rtr_problems::ProblemError;
use rtr_solver::SolverError;
use thiserror::Error;

/// Failures surfaced by the experiment runner and the CLI.
#[derive(Debug, Error)]
pub enum HarnessError {
    /// A spec file, CLI argument, or configuration value was malformed.
    #[error("invalid experiment spec: {0}")]
    InvalidSpec(String),

    /// A documented invariant failed at runtime (bound monotonicity,
    /// self-test assertion, CSV round-trip mismatch).
    #[error("invariant violation: {0}")]
    Invariant(String),

    /// Filesystem failure, annotated with the path involved.
    #[error("I/O error on {path}: {source}")]
    Io {
        /// Path of the file or directory the operation touched.
        path: String,
        /// Underlying error.
        #[source]
        source: std::io::Error,
    },

    /// JSON (de)serialization failure.
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    /// Oracle or vector-layer failure.
    #[error(transparent)]
    Core(#[from] CoreError),

    /// Solver failure.
    #[error(transparent)]
    Solver(#[from] SolverError),

    /// Problem construction failure.
    #[error(transparent)]
    Problem(#[from] ProblemError),

    /// Adversary experiment failure.
    #[error(transparent)]
    Adversary(#[from] AdversaryError),
}

impl HarnessError {
    /// Attaches a path to a raw I/O error.
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for this failure: 1 for argument/spec errors,
    /// 2 for invariant violations, 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::InvalidSpec(_) => 1,
            HarnessError::Invariant(_) => 2,
            HarnessError::Io { .. } | HarnessError::Json(_) => 3,
            // Configuration mistakes surface as solver/problem argument
            // errors; everything else in these families is a runtime
            // invariant problem (oracle faults, degenerate inputs).
            HarnessError::Solver(SolverError::InvalidConfig(_))
            | HarnessError::Solver(SolverError::InvalidArgument(_))
            | HarnessError::Problem(ProblemError::InvalidParameter(_))
            | HarnessError::Adversary(AdversaryError::InvalidArgument(_))
            | HarnessError::Core(CoreError::InvalidArgument(_)) => 1,
            HarnessError::Core(_)
            | HarnessError::Solver(_)
            | HarnessError::Problem(_)
            | HarnessError::Adversary(_) => 2,
        }
    }
}
