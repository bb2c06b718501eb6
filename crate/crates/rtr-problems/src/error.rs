use rtr_core::CoreError;
use thiserror::Error;

/// Errors raised while generating a problem instance.
#[derive(Debug, Error)]
pub enum ProblemError {
    /// A generation parameter was outside its documented domain.
    #[error("invalid problem parameter: {0}")]
    InvalidParameter(String),

    /// The requested spectrum has repeated (or zero) eigenvalues, so the
    /// factorization landscape is degenerate: critical points stop being
    /// isolated and no Morse constant exists.
    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    /// A failure bubbled up from the oracle layer.
    #[error(transparent)]
    Core(#[from] CoreError),
}
