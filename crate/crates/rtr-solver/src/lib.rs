//! Randomized trust-region method with warm-started truncated CG.
//!
//! The outer loop ([`tr_run`] / [`tr_step`]) perturbs each subproblem's
//! starting point with a small uniformly-random direction, oriented so
//! the curvature term works against the gradient (`<H xi, g> >= 0`), and
//! judges steps by a ratio shifted to account for the perturbation's
//! model cost. With the two-stage subproblem solver from
//! `rtr-subproblem` this escapes strict saddles at a doubly-logarithmic
//! price while retaining the classic method's behaviour elsewhere:
//! setting `sigma = 0` (or selecting [`SolverKind::TcgClassic`])
//! recovers deterministic baselines exactly.
//!
//! [`compute_theory_bounds`] evaluates the analysis' a-priori budgets
//! for a given problem so runs can be compared against them, and
//! [`mu_for_factorization`] instantiates the eigenvalue-separation
//! constant for factorization-style spectra.
//!
//! Everything is deterministic given the seed: records compare equal
//! bit-for-bit across runs ([`IterationRecord::deterministic_eq`]), and
//! reports carry an order-sensitive digest of the final point for cheap
//! cross-run comparison.

mod bounds;
mod config;
mod error;
mod record;
mod sampler;
mod solver;

pub use bounds::{compute_theory_bounds, mu_for_factorization, TheoryBounds};
pub use config::{SolverKind, TrustRegionConfig, XiRule};
pub use error::SolverError;
pub use record::{point_digest, IterationRecord, RunReport, TerminationReason};
pub use sampler::sample_perturbation;
pub use solver::{tr_run, tr_step, TrustRegionState};

// The subproblem stop reason appears in iteration records; re-export it
// so downstream users don't need a direct `rtr-subproblem` dependency.
pub use rtr_subproblem::StopReason;
