//! Trust-region subproblem solvers, matrix-free.
//!
//! Everything here approximately minimizes the quadratic model
//! `m(v) = <g, v> + 1/2 <v, H v>` over a ball `|v| <= delta`, touching
//! the Hessian only through product callbacks:
//!
//! * [`tcg_bg`] — truncated conjugate gradient *warm-started* at a
//!   caller-supplied point `xi` (in the randomized outer loop, a sampled
//!   perturbation with `|xi| <= delta / 4`). CG runs inside the inner
//!   ball of radius `delta / 2`; on truncation, one
//!   [`boundary_gradient_step`] over the full ball polishes the result.
//! * [`tcg_classic`] — the standard truncated CG baseline from the
//!   origin over the full ball.
//! * [`boundary_gradient_step`] — the polishing step on its own.
//! * [`check_cg_shift_equivalence`] — numerical self-test of the
//!   warm-start identity that the analysis of [`tcg_bg`] rests on.
//!
//! Solvers report the step, the stopping condition ([`StopReason`]), the
//! iteration count, the model decrease (accumulated incrementally — no
//! extra products), and optionally a full per-iteration
//! [`SubproblemTrace`] for diagnostics and tests. Hessian products are
//! the unit of cost throughout: one per CG iteration, at most one for
//! the warm start and one for the polish.

mod bgs;
mod equiv;
mod error;
mod geometry;
mod model;
mod result;
mod tcg;

pub use bgs::{boundary_gradient_step, boundary_gradient_step_with_residual};
pub use equiv::check_cg_shift_equivalence;
pub use error::SubproblemError;
pub use model::{HvpCallback, QuadraticModel};
pub use result::{StopReason, SubproblemResult, SubproblemTrace};
pub use tcg::{tcg_bg, tcg_bg_with, tcg_classic, tcg_classic_with, TcgOptions, TRACE_DIM_LIMIT};
