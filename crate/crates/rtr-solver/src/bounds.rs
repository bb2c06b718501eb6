//! Complexity constants for the randomized method, and the eigenvalue
//! separation used to instantiate them on factorization problems.
//!
//! [`compute_theory_bounds`] evaluates, from the problem constants and a
//! run configuration, the derived radii/thresholds and the three
//! iteration budgets of the convergence analysis:
//!
//! * `k_gn` — outer iterations after which, with probability at least
//!   `1 - delta_confidence`, every later iterate stays in the quadratic
//!   convergence basin of some local minimizer;
//! * `k_m_eps` — further iterations to bring the distance to that
//!   minimizer below `epsilon` (doubly-logarithmic: the local rate is
//!   quadratic);
//! * `eps_criticality_bound` — the deterministic fallback budget to
//!   reach gradient norm `epsilon` regardless of saddles.
//!
//! These are *a-priori* worst-case budgets; observed runs sit far below
//! them, and the harness prints both sides for comparison.

use crate::config::TrustRegionConfig;
use crate::error::SolverError;
use rtr_core::ProblemConstants;

/// Derived constants and iteration budgets for one (problem, config)
/// pair. All fields are finite unless noted.
#[derive(Debug, Clone, Copy)]
pub struct TheoryBounds {
    /// Critical radius below which model and objective agree to within
    /// the acceptance margin near strict saddles.
    pub delta_crit: f64,
    /// Basin radius: within `r_bar` of a local minimizer the method
    /// contracts quadratically.
    pub r_bar: f64,
    /// Gradient-norm level certifying the iterate is within `r_bar` of a
    /// minimizer (`g_bar = mu/2 * r_bar`).
    pub g_bar: f64,
    /// Guaranteed objective decrease of a large-gradient iteration.
    pub f_lg: f64,
    /// Largest perturbation size the escape analysis tolerates.
    pub sigma_bar: f64,
    /// Per-saddle failure probability after splitting
    /// `delta_confidence` across at most `(f0 - f_low)/f_lg + 1` visits.
    pub delta_prime: f64,
    /// Iterations to escape one strict saddle with probability
    /// `1 - delta_prime` (infinite when `sigma = 0`: the deterministic
    /// method can stall at a saddle forever).
    pub k_esc: f64,
    /// Global budget until the basin capture described above.
    pub k_gn: f64,
    /// Post-capture budget to distance `epsilon`.
    pub k_m_eps: f64,
    /// Deterministic budget to gradient norm `epsilon`.
    pub eps_criticality_bound: f64,
    /// Whether `sigma` satisfies both smallness conditions of the
    /// analysis (`sigma <= sigma_bar` and the escape-drift condition);
    /// always `false` for `sigma = 0`, whose guarantee is vacuous.
    pub sigma_ok: bool,
}

/// Evaluates [`TheoryBounds`].
///
/// Requires `l_g`, `l_h`, `mu`, `gamma_s` and `f_low` in `constants`
/// (naming the first missing one in the error), a confidence level
/// `delta_confidence` in `(0, 1)`, a target `epsilon > 0`, and
/// `f0 >= f_low` for the start value. `sigma = 0` is allowed and yields
/// an infinite `k_esc`/`k_gn` rather than an error.
pub fn compute_theory_bounds(
    constants: &ProblemConstants,
    config: &TrustRegionConfig,
    dim: usize,
    f0: f64,
    delta_confidence: f64,
    epsilon: f64,
) -> Result<TheoryBounds, SolverError> {
    config.validate()?;
    let l_g = constants.l_g.ok_or(SolverError::MissingConstant("l_g"))?;
    let l_h = constants.l_h.ok_or(SolverError::MissingConstant("l_h"))?;
    let mu = constants.mu.ok_or(SolverError::MissingConstant("mu"))?;
    let gamma_s = constants
        .gamma_s
        .ok_or(SolverError::MissingConstant("gamma_s"))?;
    let f_low = constants
        .f_low
        .ok_or(SolverError::MissingConstant("f_low"))?;
    if dim == 0 {
        return Err(SolverError::InvalidArgument(
            "dimension must be positive".into(),
        ));
    }
    if !(delta_confidence > 0.0 && delta_confidence < 1.0) {
        return Err(SolverError::InvalidArgument(format!(
            "confidence level must lie in (0, 1), got {delta_confidence}"
        )));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(SolverError::InvalidArgument(format!(
            "epsilon must be positive and finite, got {epsilon}"
        )));
    }
    if !(f0.is_finite() && f0 >= f_low) {
        return Err(SolverError::InvalidArgument(format!(
            "start value {f0} must be finite and at least the lower bound {f_low}"
        )));
    }

    let rho_p = config.rho_prime;
    let sigma = config.sigma;
    let delta0 = config.delta0;
    let omega2 = config.omega2;

    let delta_crit = (1.0 - rho_p) * mu * mu / (10.0 * l_h * l_g);
    let r_bar = ((1.0 - rho_p) * gamma_s / (256.0 * l_g))
        .min(mu / (8.0 * omega2 * l_g * l_g))
        .min(delta_crit / 32.0)
        .min(delta0 / 8.0);
    let g_bar = 0.5 * mu * r_bar;
    let f_lg = rho_p / (5.0 * l_g) * g_bar * g_bar;
    let sigma_bar = rho_p / (5.0 * l_g) * g_bar;
    let delta_prime = f_lg * delta_confidence / (f0 - f_low + f_lg);

    let k_esc = if sigma > 0.0 {
        let inner = 2.0 + (dim as f64).sqrt() / (omega2 * mu * delta_prime * sigma);
        2.0 + inner.log2().log2()
    } else {
        f64::INFINITY
    };
    let k_gn =
        1.5 * ((f0 - f_low) / f_lg + 1.0) * k_esc + 0.5 * (delta0 / (8.0 * r_bar)).log2();
    let k_m_eps = {
        let levels = (r_bar / epsilon).log2().max(0.0);
        (1.0 + levels).log2()
    };
    let eps_criticality_bound = 768.0 * l_g * (f0 - f_low) / (rho_p * (1.0 - rho_p) * epsilon * epsilon)
        + 0.5 * (32.0 * l_g * delta0 / ((1.0 - rho_p) * epsilon)).log2();

    // `sigma = 0` leaves k_esc infinite and the escape guarantee vacuous,
    // so it never counts as satisfying the analysis.
    let sigma_ok = sigma > 0.0
        && sigma <= sigma_bar
        && sigma * k_esc <= rho_p * mu * mu * r_bar / (8.0 * l_g * l_g);

    Ok(TheoryBounds {
        delta_crit,
        r_bar,
        g_bar,
        f_lg,
        sigma_bar,
        delta_prime,
        k_esc,
        k_gn,
        k_m_eps,
        eps_criticality_bound,
        sigma_ok,
    })
}

/// Eigenvalue separation `mu` for a factorization-style problem whose
/// target spectrum is `eigs` (sorted strictly descending, at least one
/// positive value).
///
/// The relevant critical points select subsets of eigenvectors, so the
/// Morse constant is the least gap between *consecutive selectable
/// levels*: consecutive listed eigenvalues, plus zero inserted between
/// the positive and nonpositive ones (rank-deficient critical points sit
/// at level zero). Repeated or zero eigenvalues make the landscape
/// degenerate (non-isolated critical sets) and are rejected.
pub fn mu_for_factorization(eigs: &[f64]) -> Result<f64, SolverError> {
    if eigs.is_empty() {
        return Err(SolverError::InvalidArgument(
            "spectrum must be nonempty".into(),
        ));
    }
    for value in eigs {
        if !value.is_finite() {
            return Err(SolverError::InvalidArgument(format!(
                "spectrum contains a non-finite value {value}"
            )));
        }
    }
    for pair in eigs.windows(2) {
        if pair[0] < pair[1] {
            return Err(SolverError::InvalidArgument(format!(
                "spectrum must be sorted descending, got {} before {}",
                pair[0], pair[1]
            )));
        }
        if pair[0] == pair[1] {
            return Err(SolverError::DegenerateSpectrum(format!(
                "repeated eigenvalue {}",
                pair[0]
            )));
        }
    }
    if eigs.iter().any(|&v| v == 0.0) {
        return Err(SolverError::DegenerateSpectrum(
            "zero eigenvalue".into(),
        ));
    }
    if eigs[0] <= 0.0 {
        return Err(SolverError::InvalidArgument(
            "spectrum must contain at least one positive eigenvalue".into(),
        ));
    }

    // Insert the zero level between the sign blocks, then take the
    // least consecutive gap.
    let mut levels: Vec<f64> = Vec::with_capacity(eigs.len() + 1);
    for &v in eigs {
        if v < 0.0 && levels.last().map_or(true, |&last| last > 0.0) {
            levels.push(0.0);
        }
        levels.push(v);
    }
    if *levels.last().expect("nonempty") > 0.0 {
        levels.push(0.0);
    }
    let mu = levels
        .windows(2)
        .map(|pair| pair[0] - pair[1])
        .fold(f64::INFINITY, f64::min);
    Ok(mu)
}
