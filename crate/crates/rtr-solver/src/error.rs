//! Error type for the outer loop and the bound calculator.

use rtr_core::CoreError;
use rtr_subproblem::SubproblemError;
use thiserror::Error;

/// Failures surfaced by the trust-region layer.
#[derive(Debug, Error)]
pub enum SolverError {
    /// Oracle fault or vector-layer failure.
    #[error(transparent)]
    Core(#[from] CoreError),

    /// The subproblem solver failed.
    #[error(transparent)]
    Subproblem(#[from] SubproblemError),

    /// A configuration field was outside its documented domain.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A non-configuration argument was outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The worst-case bound calculator needs a problem constant that was
    /// not provided.
    #[error("missing problem constant: {0}")]
    MissingConstant(&'static str),

    /// The supplied spectrum violates the nondegeneracy the Morse
    /// constant calculation requires (repeated or zero eigenvalues).
    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    /// A quantity that is provably nonnegative came out negative beyond
    /// roundoff — inconsistent oracle or corrupted state.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}
