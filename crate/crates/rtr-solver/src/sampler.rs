//! Perturbation sampling for the randomized warm start.
//!
//! Each outer iteration draws a direction uniformly on the unit sphere,
//! scales it by the rule-dependent radius, and orients the sign so the
//! perturbation is (weakly) *uphill* for the model: `<H xi, g> >= 0`.
//! The orientation costs exactly one Hessian-vector product; the product
//! is kept and handed to the subproblem solver, which therefore spends
//! nothing re-deriving `H xi`.

use crate::config::{TrustRegionConfig, XiRule};
use crate::error::SolverError;
use crate::solver::TrustRegionState;
use rtr_core::{DenseVector, ObjectiveOracle};

/// Radius of the perturbation for trust radius `delta` under `rule`.
pub(crate) fn perturbation_radius(rule: XiRule, sigma: f64, delta: f64) -> f64 {
    match rule {
        XiRule::Theory => sigma.min(0.25 * delta),
        XiRule::Practical => sigma.max(f64::EPSILON.sqrt()).min(delta / 100.0),
    }
}

/// Samples the oriented perturbation `xi` for the current iterate.
///
/// Requires `sigma > 0` (the deterministic path never calls this).
/// Advances the state's generator and costs exactly one Hessian-vector
/// product. Ties `<H xi, g> = 0` keep the sampled sign.
pub fn sample_perturbation(
    state: &mut TrustRegionState,
    oracle: &ObjectiveOracle,
    config: &TrustRegionConfig,
) -> Result<DenseVector, SolverError> {
    sample_perturbation_with_product(state, oracle, config).map(|(xi, _)| xi)
}

/// [`sample_perturbation`] that also returns the product `H xi` computed
/// for the sign test, letting the caller reuse it.
pub(crate) fn sample_perturbation_with_product(
    state: &mut TrustRegionState,
    oracle: &ObjectiveOracle,
    config: &TrustRegionConfig,
) -> Result<(DenseVector, DenseVector), SolverError> {
    if config.sigma <= 0.0 {
        return Err(SolverError::InvalidArgument(
            "sample_perturbation requires sigma > 0 (the deterministic path uses xi = 0)".into(),
        ));
    }
    let radius = perturbation_radius(config.xi_rule, config.sigma, state.delta);
    let mut xi = state.rng.unit_sphere(oracle.dim());
    xi.scale_in(radius);
    let mut h_xi = oracle.hvp(&state.x, &xi)?;
    if h_xi.dot(&state.g_current) < 0.0 {
        // Flip the sign; the product flips with it by linearity, so no
        // second evaluation is needed.
        xi.scale_in(-1.0);
        h_xi.scale_in(-1.0);
    }
    Ok((xi, h_xi))
}
