//! Truncated conjugate gradient for the trust-region subproblem, in two
//! flavors.
//!
//! Both minimize the model `m(v) = <g, v> + 1/2 <v, H v>` approximately,
//! touching `H` only through products:
//!
//! * [`tcg_bg`] — warm-started variant. CG starts at `v^(0) = xi` and runs
//!   inside the *inner* ball of radius `delta / 2`. When an iterate meets
//!   nonpositive curvature or a tentative step leaves the inner ball, the
//!   step is truncated to the inner sphere and polished by one boundary
//!   gradient step confined to the full ball of radius `delta` (see
//!   [`crate::boundary_gradient_step`]). The warm start is what lets a
//!   randomized outer loop feed a perturbation through CG's Krylov
//!   machinery; the halved CG ball reserves headroom so the polishing
//!   step always has room to move.
//! * [`tcg_classic`] — the standard truncated CG baseline: starts at
//!   zero, runs inside the full ball of radius `delta`, truncates to its
//!   boundary, no polishing.
//!
//! Stopping follows the usual inexact-Newton rule: accept `v^(t)` once
//! `|r^(t)| <= min(omega1 |g|, omega2 |g|^2)` with `r^(t) = -(g + H v^(t))`
//! maintained by the CG recurrence (the truncated iteration updates it as
//! `r - s H p`, costing no extra product). Each iteration spends exactly
//! one Hessian product; the warm start costs one more up front (unless
//! the caller supplies `H xi` via [`TcgOptions::h_xi`]) and the boundary
//! gradient step one more at the end, so a full solve costs at most
//! `T + 2` products.
//!
//! The model decrease `m(v^(0)) - m(u)` is accumulated incrementally from
//! quantities the iteration already holds (`m(v + c p) - m(v) =
//! -c <r, p> + c^2/2 <p, H p>`, with `<r, p> = |r|^2` along CG
//! directions), so reporting it is free.

use crate::bgs::{bgs_core, NORM_SLACK};
use crate::error::SubproblemError;
use crate::geometry::step_to_sphere;
use crate::model::QuadraticModel;
use crate::result::{StopReason, SubproblemResult, SubproblemTrace};
use rtr_core::{dot, DenseVector};

/// Above this dimension, traces are not recorded unless explicitly
/// requested: a trace keeps `O(T d)` floats alive.
pub const TRACE_DIM_LIMIT: usize = 10_000;

/// Optional knobs for a truncated CG solve.
#[derive(Debug, Clone, Default)]
pub struct TcgOptions {
    /// Record the per-iteration trace? `None` means "record iff the
    /// dimension is at most [`TRACE_DIM_LIMIT`]".
    pub record_trace: Option<bool>,
    /// Precomputed `H xi` for the warm start, saving the solver its
    /// leading Hessian product (the outer loop already owns this vector
    /// from orienting the perturbation). Trusted, not re-derived.
    /// Ignored by [`tcg_classic_with`], whose start is the origin.
    pub h_xi: Option<DenseVector>,
}

/// Warm-started truncated CG with boundary gradient polishing, default
/// options. See the module docs for the iteration.
///
/// Requires `|xi| <= delta / 4` (up to roundoff slack), `0 < omega1 < 1`,
/// `omega2 > 0` and `max_inner >= 1`.
pub fn tcg_bg(
    model: &QuadraticModel,
    delta: f64,
    xi: &DenseVector,
    omega1: f64,
    omega2: f64,
    max_inner: usize,
) -> Result<SubproblemResult, SubproblemError> {
    tcg_bg_with(model, delta, xi, omega1, omega2, max_inner, &TcgOptions::default())
}

/// [`tcg_bg`] with explicit options.
pub fn tcg_bg_with(
    model: &QuadraticModel,
    delta: f64,
    xi: &DenseVector,
    omega1: f64,
    omega2: f64,
    max_inner: usize,
    opts: &TcgOptions,
) -> Result<SubproblemResult, SubproblemError> {
    run_truncated_cg(model, delta, xi, omega1, omega2, max_inner, opts, CgMode::BoundaryGradient)
}

/// Classic truncated CG from the origin over the full ball, default
/// options: the standard baseline, no warm start, no polishing.
pub fn tcg_classic(
    model: &QuadraticModel,
    delta: f64,
    omega1: f64,
    omega2: f64,
    max_inner: usize,
) -> Result<SubproblemResult, SubproblemError> {
    tcg_classic_with(model, delta, omega1, omega2, max_inner, &TcgOptions::default())
}

/// [`tcg_classic`] with explicit options.
pub fn tcg_classic_with(
    model: &QuadraticModel,
    delta: f64,
    omega1: f64,
    omega2: f64,
    max_inner: usize,
    opts: &TcgOptions,
) -> Result<SubproblemResult, SubproblemError> {
    let origin = DenseVector::zeros(model.dim());
    run_truncated_cg(model, delta, &origin, omega1, omega2, max_inner, opts, CgMode::Classic)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum CgMode {
    /// Inner ball `delta / 2`, boundary gradient polish over the full ball.
    BoundaryGradient,
    /// Full ball `delta`, truncate and stop.
    Classic,
}

#[allow(clippy::too_many_arguments)]
fn run_truncated_cg(
    model: &QuadraticModel,
    delta: f64,
    xi: &DenseVector,
    omega1: f64,
    omega2: f64,
    max_inner: usize,
    opts: &TcgOptions,
    mode: CgMode,
) -> Result<SubproblemResult, SubproblemError> {
    let dim = model.dim();
    check_params(delta, omega1, omega2, max_inner)?;
    if xi.len() != dim {
        return Err(SubproblemError::InvalidArgument(format!(
            "start point has dimension {}, model has {}",
            xi.len(),
            dim
        )));
    }
    if mode == CgMode::BoundaryGradient {
        let xi_norm = xi.norm();
        if xi_norm > 0.25 * delta * (1.0 + NORM_SLACK) {
            return Err(SubproblemError::InvalidArgument(format!(
                "warm start norm {xi_norm} exceeds delta / 4 = {}",
                0.25 * delta
            )));
        }
    }

    let g = model.g();
    let g_norm = g.norm();
    let threshold = (omega1 * g_norm).min(omega2 * g_norm * g_norm);
    let inner_radius = match mode {
        CgMode::BoundaryGradient => 0.5 * delta,
        CgMode::Classic => delta,
    };
    let record = opts.record_trace.unwrap_or(dim <= TRACE_DIM_LIMIT);

    let mut hvp_count: u64 = 0;
    let mut v = xi.clone();
    let h_xi = match (&opts.h_xi, mode) {
        (Some(h), CgMode::BoundaryGradient) => {
            if h.len() != dim {
                return Err(SubproblemError::InvalidArgument(format!(
                    "precomputed H*xi has dimension {}, model has {}",
                    h.len(),
                    dim
                )));
            }
            h.clone()
        }
        _ if v.is_zero() => DenseVector::zeros(dim),
        _ => {
            hvp_count += 1;
            model.apply_h(&v)?
        }
    };
    // m(v^(0)), for scaling the closing sanity check on the decrease.
    let m_start = dot(g, &v)? + 0.5 * dot(&v, &h_xi)?;

    let mut r = g.add(&h_xi);
    r.scale_in(-1.0);
    let r0_norm = r.norm();

    let mut trace = record.then(|| TraceBuilder::new(&v, &r, r0_norm));

    if r0_norm == 0.0 {
        // The start already solves the model exactly: nothing to do.
        let trace = trace.take().map(|tb| tb.finish(0, hvp_count, false));
        return finish(v, StopReason::Residual, 0, trace, 0.0, r0_norm, delta, m_start);
    }

    let mut p = r.clone();
    let mut rr = r0_norm * r0_norm;
    let mut m_delta = 0.0; // m(v^(t)) - m(v^(0)), maintained incrementally
    let mut boundary = false;
    let mut hit_max_inner = false;
    let mut t = 0usize;

    loop {
        if t == max_inner {
            hit_max_inner = true;
            break;
        }
        t += 1;

        let hp = model.apply_h(&p)?;
        hvp_count += 1;
        let php = dot(&p, &hp)?;
        if let Some(tb) = &mut trace {
            tb.direction(&p, php);
        }

        let truncate = if php <= 0.0 {
            // Nonpositive curvature: the model is unbounded along p, so
            // the (undefined or backward) CG step is abandoned and the
            // iterate extended to the inner sphere instead. The recorded
            // alpha keeps the raw ratio for diagnostics (NaN at exact
            // zero curvature).
            if let Some(tb) = &mut trace {
                tb.alpha(if php == 0.0 { f64::NAN } else { rr / php });
            }
            true
        } else {
            let alpha = rr / php;
            if let Some(tb) = &mut trace {
                tb.alpha(alpha);
            }
            let mut v_next = v.clone();
            v_next.axpy_in(alpha, &p);
            if v_next.norm() >= inner_radius {
                true
            } else {
                v = v_next;
                m_delta += -alpha * rr + 0.5 * alpha * alpha * php;
                r.axpy_in(-alpha, &hp);
                false
            }
        };

        if truncate {
            let s = step_to_sphere(&v, &p, inner_radius)?;
            v.axpy_in(s, &p);
            m_delta += -s * rr + 0.5 * s * s * php;
            r.axpy_in(-s, &hp);
            if let Some(tb) = &mut trace {
                tb.iterate(&v, &r, r.norm());
            }
            boundary = true;
            break;
        }

        let r_norm = r.norm();
        if let Some(tb) = &mut trace {
            tb.iterate(&v, &r, r_norm);
        }
        if r_norm <= threshold {
            break;
        }
        let rr_next = r_norm * r_norm;
        let beta = rr_next / rr;
        if let Some(tb) = &mut trace {
            tb.beta(beta);
        }
        p.scale_in(beta);
        p.axpy_in(1.0, &r);
        rr = rr_next;
    }

    let t_in = if boundary { t - 1 } else { t };
    let (step, stop_reason) = if boundary {
        match mode {
            CgMode::BoundaryGradient => {
                let (u, _used_boundary, bgs_hvps) = bgs_core(model, delta, &v, &r, &mut m_delta)?;
                hvp_count += bgs_hvps;
                (u, StopReason::Boundary)
            }
            CgMode::Classic => (v, StopReason::Boundary),
        }
    } else {
        (v, StopReason::Residual)
    };

    let trace = trace.take().map(|tb| tb.finish(t_in, hvp_count, hit_max_inner));
    finish(step, stop_reason, t, trace, -m_delta, r0_norm, delta, m_start)
}

fn check_params(
    delta: f64,
    omega1: f64,
    omega2: f64,
    max_inner: usize,
) -> Result<(), SubproblemError> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(SubproblemError::InvalidArgument(format!(
            "radius must be finite and positive, got {delta}"
        )));
    }
    if !(omega1 > 0.0 && omega1 < 1.0) {
        return Err(SubproblemError::InvalidArgument(format!(
            "omega1 must lie in (0, 1), got {omega1}"
        )));
    }
    if !(omega2.is_finite() && omega2 > 0.0) {
        return Err(SubproblemError::InvalidArgument(format!(
            "omega2 must be finite and positive, got {omega2}"
        )));
    }
    if max_inner == 0 {
        return Err(SubproblemError::InvalidArgument(
            "max_inner must be at least 1".into(),
        ));
    }
    Ok(())
}

/// Closing sanity checks shared by every exit path. They hold in exact
/// arithmetic by construction; tripping one means the model callback is
/// inconsistent (e.g. a nonsymmetric operator) or roundoff has exploded.
#[allow(clippy::too_many_arguments)]
fn finish(
    step: DenseVector,
    stop_reason: StopReason,
    iterations: usize,
    trace: Option<SubproblemTrace>,
    model_decrease: f64,
    r0_norm: f64,
    delta: f64,
    m_start: f64,
) -> Result<SubproblemResult, SubproblemError> {
    let step_norm = step.norm();
    if step_norm > delta * (1.0 + NORM_SLACK) {
        return Err(SubproblemError::InvariantViolation(format!(
            "step norm {step_norm} exceeds the trust radius {delta}"
        )));
    }
    if model_decrease < -1e-12 * m_start.abs().max(1.0) {
        return Err(SubproblemError::InvariantViolation(format!(
            "model decrease {model_decrease} is negative beyond roundoff"
        )));
    }
    Ok(SubproblemResult {
        step,
        stop_reason,
        iterations,
        trace,
        model_decrease,
        r0_norm,
    })
}

struct TraceBuilder {
    iterates: Vec<DenseVector>,
    residuals: Vec<DenseVector>,
    residual_norms: Vec<f64>,
    directions: Vec<DenseVector>,
    alphas: Vec<f64>,
    betas: Vec<f64>,
    curvatures: Vec<f64>,
}

impl TraceBuilder {
    fn new(v0: &DenseVector, r0: &DenseVector, r0_norm: f64) -> Self {
        Self {
            iterates: vec![v0.clone()],
            residuals: vec![r0.clone()],
            residual_norms: vec![r0_norm],
            directions: Vec::new(),
            alphas: Vec::new(),
            betas: Vec::new(),
            curvatures: Vec::new(),
        }
    }

    fn direction(&mut self, p: &DenseVector, curvature: f64) {
        self.directions.push(p.clone());
        self.curvatures.push(curvature);
    }

    fn alpha(&mut self, alpha: f64) {
        self.alphas.push(alpha);
    }

    fn beta(&mut self, beta: f64) {
        self.betas.push(beta);
    }

    fn iterate(&mut self, v: &DenseVector, r: &DenseVector, r_norm: f64) {
        self.iterates.push(v.clone());
        self.residuals.push(r.clone());
        self.residual_norms.push(r_norm);
    }

    fn finish(self, t_in: usize, hvp_count: u64, hit_max_inner: bool) -> SubproblemTrace {
        SubproblemTrace {
            iterates: self.iterates,
            residuals: self.residuals,
            residual_norms: self.residual_norms,
            directions: self.directions,
            alphas: self.alphas,
            betas: self.betas,
            curvatures: self.curvatures,
            t_in,
            hvp_count,
            hit_max_inner,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::HvpCallback;

    fn diag_model(diag: &'static [f64], g: Vec<f64>) -> QuadraticModel<'static> {
        let hvp: HvpCallback<'static> = Box::new(move |u: &DenseVector| {
            DenseVector::from_fn(diag.len(), |i| diag[i] * u[i])
        });
        QuadraticModel::new(DenseVector::new(g).unwrap(), hvp).unwrap()
    }

    fn vec_of(data: &[f64]) -> DenseVector {
        DenseVector::new(data.to_vec()).unwrap()
    }

    #[test]
    fn spd_model_converges_to_newton_point() {
        // H = diag(2, 4), g = (1, 1): the unconstrained minimizer is
        // -H^{-1} g = (-1/2, -1/4), reached by CG in two exact steps,
        // comfortably inside delta / 2 for delta = 10.
        let model = diag_model(&[2.0, 4.0], vec![1.0, 1.0]);
        let xi = DenseVector::zeros(2);
        let out = tcg_bg(&model, 10.0, &xi, 0.1, 1.0, 50).unwrap();
        assert_eq!(out.stop_reason, StopReason::Residual);
        assert!(out.iterations <= 2);
        assert!((out.step[0] + 0.5).abs() < 1e-12);
        assert!((out.step[1] + 0.25).abs() < 1e-12);
        // m at the Newton point: -<g, H^{-1} g>/2 = -(1/2 + 1/4)/2.
        assert!((out.model_decrease - 0.375).abs() < 1e-12);
        let trace = out.trace.unwrap();
        assert_eq!(trace.t_in, out.iterations);
        assert!(!trace.hit_max_inner);
    }

    #[test]
    fn classic_matches_bg_on_interior_spd_solves() {
        let model = diag_model(&[2.0, 4.0], vec![1.0, 1.0]);
        let xi = DenseVector::zeros(2);
        let bg = tcg_bg(&model, 10.0, &xi, 0.1, 1.0, 50).unwrap();
        let classic = tcg_classic(&model, 10.0, 0.1, 1.0, 50).unwrap();
        assert_eq!(classic.stop_reason, StopReason::Residual);
        assert_eq!(bg.iterations, classic.iterations);
        for i in 0..2 {
            assert!((bg.step[i] - classic.step[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn negative_curvature_runs_to_the_full_ball() {
        // One-dimensional model with H = -1, g = 1. Classic: truncates at
        // the ball boundary, u = -delta. Warm-started variant: truncates
        // at delta / 2, then the boundary gradient step extends to the
        // same endpoint u = -delta.
        let delta = 2.0;
        let model_a = diag_model(&[-1.0], vec![1.0]);
        let classic = tcg_classic(&model_a, delta, 0.1, 1.0, 50).unwrap();
        assert_eq!(classic.stop_reason, StopReason::Boundary);
        assert_eq!(classic.iterations, 1);
        assert!((classic.step[0] + delta).abs() < 1e-12);
        // m(-2) = -2 - 2 = -4... with H = -1: m(u) = u + (-1) u^2 / 2 = -2 - 2 = -4.
        assert!((classic.model_decrease - 4.0).abs() < 1e-12);

        let model_b = diag_model(&[-1.0], vec![1.0]);
        let xi = DenseVector::zeros(1);
        let bg = tcg_bg(&model_b, delta, &xi, 0.1, 1.0, 50).unwrap();
        assert_eq!(bg.stop_reason, StopReason::Boundary);
        assert!((bg.step[0] + delta).abs() < 1e-12);
        assert!((bg.model_decrease - 4.0).abs() < 1e-12);
        let trace = bg.trace.unwrap();
        assert_eq!(trace.t_in, bg.iterations - 1);
        // Truncated iterate sits on the inner sphere; the polished step
        // lives only in `step`.
        assert!((trace.iterates.last().unwrap().norm() - delta / 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_initial_residual_returns_the_start_with_t_zero() {
        // Warm start exactly at the model minimizer: r^(0) = 0.
        let model = diag_model(&[2.0, 4.0], vec![1.0, 1.0]);
        let xi = vec_of(&[-0.5, -0.25]);
        let out = tcg_bg(&model, 10.0, &xi, 0.1, 1.0, 50).unwrap();
        assert_eq!(out.stop_reason, StopReason::Residual);
        assert_eq!(out.iterations, 0);
        assert_eq!(out.step, xi);
        assert_eq!(out.model_decrease, 0.0);
        assert_eq!(out.r0_norm, 0.0);
        let trace = out.trace.unwrap();
        assert_eq!(trace.iterates.len(), 1);
        assert_eq!(trace.t_in, 0);
    }

    #[test]
    fn supplied_h_xi_saves_the_leading_product() {
        use std::cell::Cell;
        let calls = Cell::new(0u64);
        let diag = [2.0f64, 4.0];
        let hvp: HvpCallback<'_> = Box::new(|u: &DenseVector| {
            calls.set(calls.get() + 1);
            DenseVector::from_fn(2, |i| diag[i] * u[i])
        });
        let model = QuadraticModel::new(vec_of(&[1.0, 1.0]), hvp).unwrap();
        let xi = vec_of(&[0.01, -0.02]);
        let h_xi = DenseVector::from_fn(2, |i| diag[i] * xi[i]).unwrap();
        let opts = TcgOptions {
            h_xi: Some(h_xi),
            ..TcgOptions::default()
        };
        let out = tcg_bg_with(&model, 10.0, &xi, 0.1, 1.0, 50, &opts).unwrap();
        // Every product spent went through the counter, and the warm
        // start's product was not among them.
        assert_eq!(calls.get(), out.iterations as u64);
        assert_eq!(out.trace.unwrap().hvp_count, calls.get());
    }

    #[test]
    fn max_inner_exhaustion_is_flagged_and_stays_interior() {
        // Ill-conditioned SPD model that CG cannot finish in 2 steps.
        let model = diag_model(&[1.0, 10.0, 100.0, 1000.0], vec![1.0, 1.0, 1.0, 1.0]);
        let xi = DenseVector::zeros(4);
        let out = tcg_bg(&model, 1e6, &xi, 1e-12, 1e-12, 2).unwrap();
        assert_eq!(out.stop_reason, StopReason::Residual);
        assert_eq!(out.iterations, 2);
        let trace = out.trace.unwrap();
        assert!(trace.hit_max_inner);
        assert_eq!(trace.t_in, 2);
    }

    #[test]
    fn warm_start_outside_quarter_ball_is_rejected() {
        let model = diag_model(&[2.0, 4.0], vec![1.0, 1.0]);
        let xi = vec_of(&[1.0, 0.0]);
        assert!(matches!(
            tcg_bg(&model, 2.0, &xi, 0.1, 1.0, 50),
            Err(SubproblemError::InvalidArgument(_))
        ));
    }

    #[test]
    fn parameter_domains_are_enforced() {
        let model = diag_model(&[2.0, 4.0], vec![1.0, 1.0]);
        let xi = DenseVector::zeros(2);
        assert!(tcg_bg(&model, 0.0, &xi, 0.1, 1.0, 50).is_err());
        assert!(tcg_bg(&model, 1.0, &xi, 0.0, 1.0, 50).is_err());
        assert!(tcg_bg(&model, 1.0, &xi, 1.0, 1.0, 50).is_err());
        assert!(tcg_bg(&model, 1.0, &xi, 0.1, 0.0, 50).is_err());
        assert!(tcg_bg(&model, 1.0, &xi, 0.1, 1.0, 0).is_err());
    }

    #[test]
    fn trace_is_omitted_when_disabled() {
        let model = diag_model(&[2.0, 4.0], vec![1.0, 1.0]);
        let xi = DenseVector::zeros(2);
        let opts = TcgOptions {
            record_trace: Some(false),
            ..TcgOptions::default()
        };
        let out = tcg_bg_with(&model, 10.0, &xi, 0.1, 1.0, 50, &opts).unwrap();
        assert!(out.trace.is_none());
    }

    #[test]
    fn truncation_to_the_inner_sphere_is_exact() {
        // Strong gradient, tiny ball: the first CG step already escapes.
        let model = diag_model(&[1.0, 1.0], vec![3.0, 4.0]);
        let xi = DenseVector::zeros(2);
        let delta = 0.1;
        let out = tcg_bg(&model, delta, &xi, 0.1, 1.0, 50).unwrap();
        assert_eq!(out.stop_reason, StopReason::Boundary);
        let trace = out.trace.unwrap();
        let truncated = trace.iterates.last().unwrap();
        assert!((truncated.norm() - delta / 2.0).abs() < 1e-14);
        // With H = I the boundary gradient step keeps descending; the
        // final step must not leave the full ball.
        assert!(out.step.norm() <= delta * (1.0 + 1e-9));
        assert!(out.model_decrease > 0.0);
    }
}
