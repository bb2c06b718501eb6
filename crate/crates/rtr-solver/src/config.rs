//! Outer-loop configuration.

use crate::error::SolverError;

/// How the perturbation radius scales with the trust radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XiRule {
    /// `|xi| = min(sigma, delta / 4)` — the scaling the worst-case
    /// analysis assumes.
    Theory,
    /// `|xi| = min(max(sigma, sqrt(eps_machine)), delta / 100)` — a more
    /// conservative radius for experiments, never below noise level but
    /// a much smaller fraction of the trust region.
    Practical,
}

/// Which subproblem solver the outer loop drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    /// Warm-started truncated CG with boundary gradient polish.
    TcgBg,
    /// Classic truncated CG from the origin (ignores `sigma`; the
    /// baseline is deterministic by construction).
    TcgClassic,
}

/// Parameters of the trust-region outer loop.
///
/// Defaults give the randomized configuration used throughout the test
/// and benchmark suites: acceptance thresholds `rho_prime = 0.1`,
/// `rho_double_prime = 0.75`, unit initial radius with `delta_bar = 10`,
/// perturbation scale `sigma = 1e-6`, residual thresholds
/// `omega1 = 0.1`, `omega2 = 1.0`.
#[derive(Debug, Clone)]
pub struct TrustRegionConfig {
    /// Acceptance threshold: a step is taken iff `rho >= rho_prime`.
    pub rho_prime: f64,
    /// Expansion threshold: the radius doubles only when
    /// `rho > rho_double_prime` *and* the subproblem truncated.
    pub rho_double_prime: f64,
    /// Hard cap on the trust radius.
    pub delta_bar: f64,
    /// Initial trust radius, in `(0, delta_bar]`.
    pub delta0: f64,
    /// Perturbation scale; `0` selects the deterministic variant
    /// (`xi = 0`, no sampling).
    pub sigma: f64,
    /// Relative residual threshold, in `(0, 1)`.
    pub omega1: f64,
    /// Quadratic residual threshold, `> 0`.
    pub omega2: f64,
    /// Perturbation radius rule.
    pub xi_rule: XiRule,
    /// Diagonal offset added to the model Hessian (`>= 0`; `0` means the
    /// plain Newton model).
    pub hessian_shift: f64,
    /// Outer iteration budget, `>= 1`.
    pub max_outer: usize,
    /// Stop once an *accepted* iterate has gradient norm at most this
    /// (`0` disables the test; it is never applied to the start point,
    /// so a run launched exactly at a critical point still iterates).
    pub grad_tol: f64,
    /// Seed for the perturbation stream.
    pub seed: u64,
    /// Subproblem solver.
    pub solver: SolverKind,
    /// CG iteration budget per subproblem; `None` means the ambient
    /// dimension (the exact-arithmetic bound).
    pub max_inner: Option<usize>,
    /// Hard cap applied on top of `max_inner`, guarding against
    /// rounding-induced loss of conjugacy; `None` means
    /// `min(10 * dim, 10_000)`.
    pub max_inner_cap: Option<usize>,
    /// Keep the iterate sequence in the report (`O(max_outer * d)`
    /// memory — meant for small-dimensional diagnostics).
    pub keep_iterates: bool,
    /// Keep the sampled perturbations in the report.
    pub keep_xi: bool,
}

impl Default for TrustRegionConfig {
    fn default() -> Self {
        Self {
            rho_prime: 0.1,
            rho_double_prime: 0.75,
            delta_bar: 10.0,
            delta0: 1.0,
            sigma: 1e-6,
            omega1: 0.1,
            omega2: 1.0,
            xi_rule: XiRule::Theory,
            hessian_shift: 0.0,
            max_outer: 100,
            grad_tol: 0.0,
            seed: 0,
            solver: SolverKind::TcgBg,
            max_inner: None,
            max_inner_cap: None,
            keep_iterates: false,
            keep_xi: false,
        }
    }
}

impl TrustRegionConfig {
    /// Checks every field against its documented domain, including the
    /// coupling `4 sigma <= delta0` that the randomized variant's
    /// analysis requires under the `Theory` radius rule.
    pub fn validate(&self) -> Result<(), SolverError> {
        let err = |msg: String| Err(SolverError::InvalidConfig(msg));
        if !(self.rho_prime > 0.0 && self.rho_prime < self.rho_double_prime) {
            return err(format!(
                "need 0 < rho_prime < rho_double_prime, got {} and {}",
                self.rho_prime, self.rho_double_prime
            ));
        }
        if !(self.rho_double_prime < 1.0) {
            return err(format!(
                "rho_double_prime must be below 1, got {}",
                self.rho_double_prime
            ));
        }
        if !(self.delta_bar.is_finite() && self.delta_bar > 0.0) {
            return err(format!("delta_bar must be finite and positive, got {}", self.delta_bar));
        }
        if !(self.delta0 > 0.0 && self.delta0 <= self.delta_bar) {
            return err(format!(
                "delta0 must lie in (0, delta_bar], got {} with delta_bar {}",
                self.delta0, self.delta_bar
            ));
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return err(format!("sigma must be finite and >= 0, got {}", self.sigma));
        }
        if !(self.omega1 > 0.0 && self.omega1 < 1.0) {
            return err(format!("omega1 must lie in (0, 1), got {}", self.omega1));
        }
        if !(self.omega2.is_finite() && self.omega2 > 0.0) {
            return err(format!("omega2 must be finite and positive, got {}", self.omega2));
        }
        if !(self.hessian_shift.is_finite() && self.hessian_shift >= 0.0) {
            return err(format!(
                "hessian_shift must be finite and >= 0, got {}",
                self.hessian_shift
            ));
        }
        if self.max_outer == 0 {
            return err("max_outer must be at least 1".into());
        }
        if !(self.grad_tol.is_finite() && self.grad_tol >= 0.0) {
            return err(format!("grad_tol must be finite and >= 0, got {}", self.grad_tol));
        }
        if self.sigma > 0.0
            && self.solver == SolverKind::TcgBg
            && self.xi_rule == XiRule::Theory
            && 4.0 * self.sigma > self.delta0
        {
            return err(format!(
                "the randomized variant requires 4 sigma <= delta0, got sigma {} with delta0 {}",
                self.sigma, self.delta0
            ));
        }
        Ok(())
    }

    /// The CG budget actually handed to the subproblem for dimension
    /// `dim`: the requested `max_inner` (default `dim`) clamped to
    /// `[1, cap]` with `cap` defaulting to `min(10 * dim, 10_000)`.
    pub fn effective_max_inner(&self, dim: usize) -> usize {
        let cap = self.max_inner_cap.unwrap_or((10 * dim).min(10_000)).max(1);
        self.max_inner.unwrap_or(dim).clamp(1, cap)
    }
}
