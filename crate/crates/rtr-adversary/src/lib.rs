//! The deterministic lower-bound construction: a resisting oracle, the
//! transcript it builds, and the function it reveals afterwards.
//!
//! The game has three moves.
//!
//! 1. A solver that picks each query as a deterministic function of past
//!    answers asks for second-order information at `K` (point, direction)
//!    pairs. The [resisting oracle](resisting_oracle_answer) answers as if
//!    the objective were `|x|^2 / 2` and records everything in a
//!    [`QueryLog`], which maintains an orthonormal basis of the subspace
//!    the queries span — at most two new directions per query.
//! 2. After the budget, [`reveal_hidden_function`] produces a smooth
//!    function consistent with every logged answer whose global minimum
//!    `-2` sits a distance `pi` from the origin, in a direction
//!    orthogonal to everything the solver touched. Since `K` queries span
//!    at most `2K` directions, dimension `d >= 2K + 1` always leaves room.
//!    The solver's trajectory, replayed on the revealed function, never
//!    saw a value below `0`.
//! 3. The randomized trust-region solver, run on the revealed function
//!    from the origin, escapes the hidden saddle anyway — its
//!    perturbation has a component along the hidden direction almost
//!    surely. [`run_adversary_experiment`] packages the whole game,
//!    including this escape run, into an [`AdversaryReport`].
//!
//! [`WrappedTrustRegion`] adapts the deterministic trust-region baseline
//! to the game's interface, with every oracle call counted as one query.

mod error;
mod experiment;
mod log;
mod reveal;

pub use error::AdversaryError;
pub use experiment::{
    run_adversary_experiment, run_adversary_experiment_with, AdversaryReport,
    DeterministicSolver, WrappedTrustRegion, DEFAULT_ESCAPE_THRESHOLD,
};
pub use log::{resisting_oracle_answer, QueryLog, SPAN_RESIDUAL_THRESHOLD};
pub use reveal::reveal_hidden_function;
