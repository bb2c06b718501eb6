//! Matrix-free oracle layer shared by the trust-region solver stack.
//!
//! Everything above this crate talks to an objective function exclusively
//! through an [`ObjectiveOracle`]: a value closure, a gradient closure and a
//! Hessian-vector-product closure, each guarded by dimension and finiteness
//! checks and each metered by a call counter. No module in the workspace ever
//! materializes a Hessian.
//!
//! The crate also provides:
//!
//! - [`DenseVector`], a thin validated wrapper over `Vec<f64>` with the
//!   handful of BLAS-1 kernels the solvers need ([`dot`], [`axpy`], in-place
//!   variants);
//! - [`DeterministicRng`], a counter-based (ChaCha) random stream with an
//!   explicit `(seed, stream)` addressing scheme so every run is replayable;
//! - [`validate_oracle`], a central-difference consistency check that every
//!   shipped problem must pass before it is trusted;
//! - [`ProblemConstants`], the optional regularity constants (`L_G`, `L_H`,
//!   `mu`, ...) that feed the a-priori complexity bounds downstream.

mod constants;
mod error;
mod oracle;
mod rng;
mod validate;
mod vector;

pub use constants::ProblemConstants;
pub use error::{CoreError, OracleCall};
pub use oracle::{CounterSnapshot, GradFn, HvpFn, ObjectiveOracle, ValueFn};
pub use rng::DeterministicRng;
pub use validate::{validate_oracle, ValidationReport, DEFAULT_VALIDATION_STEP};
pub use vector::{axpy, dot, DenseVector};
