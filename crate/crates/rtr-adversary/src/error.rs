//! Error type for the adversary construction.

use rtr_core::CoreError;
use rtr_solver::SolverError;
use thiserror::Error;

/// Failures surfaced by the resisting-oracle layer.
#[derive(Debug, Error)]
pub enum AdversaryError {
    /// Oracle fault or vector-layer failure.
    #[error(transparent)]
    Core(#[from] CoreError),

    /// The escape run's trust-region solver failed.
    #[error(transparent)]
    Solver(#[from] SolverError),

    /// An argument was outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The queries already span the whole space, so no direction is left
    /// to hide the valley in.
    #[error("query span covers the whole space (span {span_dim} in dimension {dim}); nothing is left to reveal")]
    FullSpan {
        /// Dimension of the query span.
        span_dim: usize,
        /// Ambient dimension.
        dim: usize,
    },
}
