//! Benchmark objectives for the trust-region solver stack.
//!
//! Each constructor returns a [`ProblemInstance`]: a metered matrix-free
//! oracle together with the regularity constants that are actually known
//! for the family and whatever critical-point metadata exists in closed
//! form (a saddle to launch escape experiments from, an exact minimizer
//! for local-convergence checks, the global minimum value as a floor every
//! legitimate run must respect).
//!
//! The families:
//!
//! * [`make_sine_saddle`] — separable trigonometric landscape, a strict
//!   saddle of value `1e-2` at the origin, fully explicit constants; the
//!   workhorse of the escape experiments, usable at `d = 10^5` since every
//!   oracle call is `O(d)`.
//! * [`make_rank_one_factorization`] — `1/4 |x x^T - M|_F^2` for a dense
//!   symmetric `M` with a chosen spectrum; isolated critical points with a
//!   known Morse constant, the stage for quadratic local convergence.
//! * [`make_rect_matrix_approx`] / [`make_psd_matrix_approx`] — sparse
//!   low-rank approximation objectives (rectangular with ridge
//!   regularization, and symmetric PSD); saddles at the origin, with
//!   deliberate Morse violations in the `lambda = 0` and `r >= 2`
//!   regimes.
//! * [`make_nonlinear_synchronization`] — exponential attraction of `n`
//!   particles with a quadratic penalty standing in for the unit-norm
//!   constraint.
//! * [`make_worst_case_cosine`] — the axis-aligned form of the hard
//!   instance the adversary experiments reveal; every constant explicit.
//!
//! Instance generation draws from a dedicated random stream (`stream 2`)
//! of the user seed, so problems, initial points and solver runs can share
//! one seed without coupling; equal descriptors rebuild bitwise-identical
//! instances. Every shipped family passes the central-difference
//! validation in `rtr_core::validate_oracle` — the integration tests pin
//! that, alongside hand-computed values for each formula.

mod cache;
mod cosine;
mod dense;
mod error;
mod factorization;
mod instance;
mod sine;
mod sparse;
mod sync;

pub use cosine::make_worst_case_cosine;
pub use error::ProblemError;
pub use factorization::{make_psd_matrix_approx, make_rank_one_factorization, make_rect_matrix_approx};
pub use instance::{ProblemDescriptor, ProblemInstance};
pub use sine::make_sine_saddle;
pub use sparse::SparseCoo;
pub use sync::{make_nonlinear_synchronization, SYNC_PENALTY_WEIGHT};

/// Random stream used for instance generation. The solver owns stream 1 of
/// the user seed; keeping generation on its own stream means a problem and
/// a run configured with the same seed stay statistically independent.
/// Public so downstream code (and tests) can reproduce the exact draws a
/// constructor makes — e.g. to rebuild a target matrix outside the oracle.
pub const PROBLEM_RNG_STREAM: u64 = 2;
