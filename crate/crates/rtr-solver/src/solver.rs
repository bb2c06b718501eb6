//! The randomized trust-region outer loop.
//!
//! One iteration from `(x_k, delta_k)`:
//!
//! 1. Sample the oriented perturbation `xi_k` with
//!    `|xi_k| = min(sigma, delta_k / 4)` (or the practical rule), sign
//!    such that `<H_k xi_k, g_k> >= 0` — one Hessian product, reused by
//!    the subproblem (`xi_k = 0` for the deterministic variants).
//! 2. Solve the subproblem from `xi_k` with the configured solver to get
//!    the step `u_k` and the model decrease `m(xi_k) - m(u_k)`.
//! 3. Form the *shifted* improvement ratio
//!    `rho_k = (f(x_k) - f(x_k + u_k) + theta_k) / (m(xi_k) - m(u_k))`
//!    with `theta_k = <g, xi> + 1/2 <H xi, xi>` — the numerator credits
//!    the step for the model value the perturbation gave away, which is
//!    what keeps acceptance meaningful when `u_k` must undo a bad `xi_k`.
//! 4. Accept iff `rho_k >= rho_prime`; update the radius: quartered on
//!    rejection, doubled (capped at `delta_bar`) after a high-quality
//!    truncated step (`rho_k > rho_double_prime` and a boundary stop),
//!    unchanged otherwise.
//!
//! Oracle budget per iteration: at most one value, one gradient (only on
//! acceptance) and `T_k + 2` Hessian products.
//!
//! The ratio's denominator is nonnegative by construction (the solver
//! never increases the model from its start). A denominator below
//! `-1e-12` (relative) is reported as an invariant violationarising from
//! an inconsistent oracle; a denominator smaller than `1e-15` relative
//! to `f(x_k)` is treated as an unsuccessful iteration with `rho = NaN`
//! — at that scale the ratio is pure roundoff, and rejecting is the
//! conservative move (it only shrinks the radius).

use std::time::Instant;

use crate::config::{SolverKind, TrustRegionConfig};
use crate::error::SolverError;
use crate::record::{point_digest, IterationRecord, RunReport, TerminationReason};
use crate::sampler::sample_perturbation_with_product;
use rtr_core::{axpy, dot, DenseVector, DeterministicRng, ObjectiveOracle};
use rtr_subproblem::{tcg_bg_with, tcg_classic_with, QuadraticModel, TcgOptions};

/// Stream index of the solver's perturbation generator (other streams of
/// the same seed belong to problem construction and start-point rules).
const SOLVER_RNG_STREAM: u64 = 1;

/// Mutable state of a run: current iterate, radius, cached oracle values
/// and the perturbation generator.
#[derive(Debug, Clone)]
pub struct TrustRegionState {
    /// Current iterate `x_k`.
    pub x: DenseVector,
    /// Current trust radius `delta_k`, in `(0, delta_bar]`.
    pub delta: f64,
    /// Iterations completed.
    pub k: usize,
    /// Perturbation generator (seeded from the config, its own stream).
    pub rng: DeterministicRng,
    /// Cached `f(x_k)` — refreshed only on accepted steps.
    pub f_current: f64,
    /// Cached `grad f(x_k)` — refreshed only on accepted steps.
    pub g_current: DenseVector,
}

impl TrustRegionState {
    /// Validates the configuration and evaluates the objective and
    /// gradient once at `x0` (the run's only evaluations outside
    /// [`tr_step`]).
    pub fn init(
        oracle: &ObjectiveOracle,
        x0: DenseVector,
        config: &TrustRegionConfig,
    ) -> Result<Self, SolverError> {
        config.validate()?;
        if x0.len() != oracle.dim() {
            return Err(SolverError::InvalidArgument(format!(
                "start point has dimension {}, oracle has {}",
                x0.len(),
                oracle.dim()
            )));
        }
        let f_current = oracle.value(&x0)?;
        let g_current = oracle.grad(&x0)?;
        Ok(Self {
            x: x0,
            delta: config.delta0,
            k: 0,
            rng: DeterministicRng::new(config.seed, SOLVER_RNG_STREAM),
            f_current,
            g_current,
        })
    }
}

/// One outer iteration; mutates `state` and returns its record (with
/// `wall_ms = NaN` — timed runs stamp it; see [`IterationRecord`]).
pub fn tr_step(
    state: &mut TrustRegionState,
    oracle: &ObjectiveOracle,
    config: &TrustRegionConfig,
) -> Result<IterationRecord, SolverError> {
    tr_step_full(state, oracle, config).map(|(record, _)| record)
}

/// [`tr_step`] that also hands back the sampled perturbation, for report
/// logging.
pub(crate) fn tr_step_full(
    state: &mut TrustRegionState,
    oracle: &ObjectiveOracle,
    config: &TrustRegionConfig,
) -> Result<(IterationRecord, DenseVector), SolverError> {
    let dim = oracle.dim();
    let delta_before = state.delta;
    let f_x = state.f_current;
    let grad_norm = state.g_current.norm();

    // Perturbation (randomized warm-started variant only).
    let randomized = config.sigma > 0.0 && config.solver == SolverKind::TcgBg;
    let (xi, h_xi_model, theta, xi_norm, xi_curvature) = if randomized {
        let (xi, h_xi) = sample_perturbation_with_product(state, oracle, config)?;
        let xi_norm = xi.norm();
        let xi_curvature = dot(&h_xi, &xi)? / (xi_norm * xi_norm);
        // The subproblem sees the shifted operator, so the reusable
        // product and theta must include the shift.
        let h_xi_model = if config.hessian_shift == 0.0 {
            h_xi
        } else {
            axpy(config.hessian_shift, &xi, &h_xi)?
        };
        let theta = dot(&state.g_current, &xi)? + 0.5 * dot(&h_xi_model, &xi)?;
        (xi, Some(h_xi_model), theta, xi_norm, xi_curvature)
    } else {
        (DenseVector::zeros(dim), None, 0.0, 0.0, f64::NAN)
    };

    // Subproblem solve on the model frozen at x_k.
    let model = QuadraticModel::at_point(
        oracle,
        state.x.clone(),
        state.g_current.clone(),
        config.hessian_shift,
    )?;
    let max_inner = config.effective_max_inner(dim);
    let opts = TcgOptions {
        record_trace: Some(false),
        h_xi: h_xi_model,
    };
    let result = match config.solver {
        SolverKind::TcgBg => tcg_bg_with(
            &model,
            delta_before,
            &xi,
            config.omega1,
            config.omega2,
            max_inner,
            &opts,
        )?,
        SolverKind::TcgClassic => tcg_classic_with(
            &model,
            delta_before,
            config.omega1,
            config.omega2,
            max_inner,
            &opts,
        )?,
    };

    // Shifted improvement ratio.
    let x_trial = state.x.add(&result.step);
    let f_trial = oracle.value(&x_trial)?;
    let numerator = f_x - f_trial + theta;
    let denominator = result.model_decrease;
    if denominator < -1e-12 * theta.abs().max(1.0) {
        return Err(SolverError::InvariantViolation(format!(
            "model decrease {denominator} is negative beyond roundoff at iteration {}",
            state.k
        )));
    }
    let rho = if denominator <= 1e-15 * f_x.abs().max(1.0) {
        f64::NAN
    } else {
        numerator / denominator
    };
    let accepted = rho >= config.rho_prime; // NaN compares false: unsuccessful

    // Radius update.
    let delta_after = if !accepted {
        0.25 * delta_before
    } else if rho > config.rho_double_prime && result.stop_reason == rtr_subproblem::StopReason::Boundary
    {
        (2.0 * delta_before).min(config.delta_bar)
    } else {
        delta_before
    };

    if accepted {
        state.x = x_trial;
        state.f_current = f_trial;
        state.g_current = oracle.grad(&state.x)?;
    }
    state.delta = delta_after;
    state.k += 1;

    let counters = oracle.counters();
    let record = IterationRecord {
        k: state.k - 1,
        f_value: f_x,
        grad_norm,
        rho,
        theta,
        accepted,
        stop_reason: result.stop_reason,
        delta_before,
        delta_after,
        inner_iters: result.iterations,
        hvp_cum: counters.n_hvp,
        f_cum: counters.n_f,
        grad_cum: counters.n_grad,
        xi_norm,
        model_decrease: denominator,
        wall_ms: f64::NAN,
        xi_curvature,
        r0_norm: result.r0_norm,
    };
    Ok((record, xi))
}

/// Runs the loop from `x0` until the outer budget runs out or an
/// accepted iterate meets `grad_tol` (when positive). Deterministic
/// given `(seed, config, oracle)` — see the determinism tests.
pub fn tr_run(
    oracle: &ObjectiveOracle,
    x0: DenseVector,
    config: &TrustRegionConfig,
) -> Result<RunReport, SolverError> {
    let start = Instant::now();
    let mut state = TrustRegionState::init(oracle, x0, config)?;
    let mut records = Vec::with_capacity(config.max_outer.min(4096));
    let mut iterates = config.keep_iterates.then(|| vec![state.x.clone()]);
    let mut xi_log = config.keep_xi.then(Vec::new);
    let mut terminated_by = TerminationReason::MaxOuter;

    for _ in 0..config.max_outer {
        let (mut record, xi) = tr_step_full(&mut state, oracle, config)?;
        record.wall_ms = start.elapsed().as_secs_f64() * 1e3;
        let accepted = record.accepted;
        records.push(record);
        if let Some(log) = &mut xi_log {
            log.push(xi);
        }
        if let Some(history) = &mut iterates {
            history.push(state.x.clone());
        }
        if accepted && config.grad_tol > 0.0 && state.g_current.norm() <= config.grad_tol {
            terminated_by = TerminationReason::GradTol;
            break;
        }
    }

    Ok(RunReport {
        final_point_digest: point_digest(&state.x),
        final_f: state.f_current,
        final_grad_norm: state.g_current.norm(),
        totals: oracle.counters(),
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        terminated_by,
        records,
        final_point: state.x,
        iterates,
        xi_log,
    })
}
