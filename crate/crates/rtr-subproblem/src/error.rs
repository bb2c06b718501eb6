//! Error type shared by the subproblem solvers.

use rtr_core::CoreError;
use thiserror::Error;

/// Failures surfaced by the subproblem layer.
///
/// `InvalidArgument` covers caller mistakes (parameters outside their
/// documented domain, mismatched dimensions, a warm start outside the
/// region it must lie in). `InvariantViolation` flags states that are
/// unreachable under exact arithmetic; seeing one means the model
/// callback is inconsistent or floating-point error has grown far
/// beyond what the solver tolerates.
#[derive(Debug, Error)]
pub enum SubproblemError {
    /// The underlying oracle reported a fault (non-finite output, bad shape).
    #[error(transparent)]
    Core(#[from] CoreError),

    /// A parameter or input was outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An internal invariant that holds in exact arithmetic was violated.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}
