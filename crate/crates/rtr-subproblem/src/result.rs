//! Output types shared by the subproblem solvers.

use rtr_core::DenseVector;

/// Why the truncated CG loop handed back a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// The residual dropped below the inexactness threshold
    /// `min(omega1 * |g|, omega2 * |g|^2)` (or the iteration budget ran
    /// out, flagged separately via [`SubproblemTrace::hit_max_inner`]).
    Residual,
    /// The iterate left the inner ball or met nonpositive curvature and
    /// was truncated to the boundary.
    Boundary,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StopReason::Residual => write!(f, "RES"),
            StopReason::Boundary => write!(f, "OOB"),
        }
    }
}

/// Per-iteration history of one truncated CG solve.
///
/// Index conventions (with `T` the final iteration count):
/// `iterates[t]` is `v^(t)` for `t = 0..=T`, `residuals[t]` and
/// `residual_norms[t]` track `r^(t)` alongside, `directions[t]` is
/// `p^(t)` for `t = 0..T`, `alphas[t-1]` and `curvatures[t-1]` belong to
/// iteration `t` (`alphas` holds the unclamped CG step `|r|^2 / <p, Hp>`,
/// `NaN` when the curvature is exactly zero on a truncated iteration),
/// and `betas[t-1]` is the conjugacy coefficient computed after each
/// iteration that did not stop the loop.
///
/// On a boundary stop, the final entries of `iterates`/`residuals`
/// describe the truncated point on the inner sphere, *before* any
/// boundary gradient step; the polished step lives only in
/// [`SubproblemResult::step`].
#[derive(Debug, Clone)]
pub struct SubproblemTrace {
    /// CG iterates `v^(0), ..., v^(T)`.
    pub iterates: Vec<DenseVector>,
    /// Residuals `r^(t) = -(H v^(t) + g)`, maintained by recurrence.
    pub residuals: Vec<DenseVector>,
    /// Norms of the residuals above.
    pub residual_norms: Vec<f64>,
    /// Search directions `p^(0), ..., p^(T-1)`.
    pub directions: Vec<DenseVector>,
    /// CG step lengths per iteration (see type-level docs for the
    /// truncation convention).
    pub alphas: Vec<f64>,
    /// Conjugacy coefficients `beta`.
    pub betas: Vec<f64>,
    /// Curvatures `<p, H p>` per iteration.
    pub curvatures: Vec<f64>,
    /// Largest `t` with all of `v^(0), ..., v^(t)` strictly inside the
    /// inner ball: equals `T` on a residual stop and `T - 1` on a
    /// boundary stop.
    pub t_in: usize,
    /// Hessian products spent by this solve (including the boundary
    /// gradient step, when one ran).
    pub hvp_count: u64,
    /// `true` iff the loop stopped because it exhausted `max_inner`
    /// rather than meeting a genuine stopping test.
    pub hit_max_inner: bool,
}

/// Result of one trust-region subproblem solve.
#[derive(Debug, Clone)]
pub struct SubproblemResult {
    /// The step `u` handed to the outer loop.
    pub step: DenseVector,
    /// Residual or boundary stop.
    pub stop_reason: StopReason,
    /// Number of CG iterations `T` (zero iff the initial residual was
    /// exactly zero).
    pub iterations: usize,
    /// Per-iteration history; `None` when trace recording is off (the
    /// default above dimension 10_000).
    pub trace: Option<SubproblemTrace>,
    /// Model decrease `m(v^(0)) - m(u) >= 0`, accumulated incrementally
    /// (no extra Hessian products).
    pub model_decrease: f64,
    /// Norm of the initial residual `|g + H v^(0)|`.
    pub r0_norm: f64,
}
