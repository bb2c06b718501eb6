//! Boundary gradient step: one steepest-descent step on the model,
//! taken from a point on the inner sphere and confined to the full ball.
//!
//! Given the model `m(v) = <g, v> + 1/2 <v, H v>`, a radius `delta` and a
//! point `v` with `|v| <= delta`, the step moves along the model's
//! steepest-descent direction `r = -(g + H v)`:
//!
//! * `r = 0`: return `v` unchanged;
//! * exact line minimizer `v + (|r|^2 / <r, H r>) r` if the curvature
//!   along `r` is positive and the minimizer stays strictly inside the
//!   ball;
//! * otherwise the boundary point `v + s r` with `s >= 0` chosen so that
//!   `|v + s r| = delta`.
//!
//! The truncated CG solver calls this after truncating to the sphere of
//! radius `delta / 2`; from there the full ball leaves room for a step of
//! length at least `delta / 2`, which is what makes the polished step's
//! decrease guarantee go through. Exactly one Hessian product is spent
//! when the caller already holds the residual, two otherwise (and zero
//! when `r = 0`).

use crate::error::SubproblemError;
use crate::geometry::step_to_sphere;
use crate::model::QuadraticModel;
use rtr_core::{dot, DenseVector};

/// Relative slack accepted on norm preconditions, absorbing roundoff from
/// truncation arithmetic in the caller.
pub(crate) const NORM_SLACK: f64 = 1e-9;

/// Boundary gradient step from `v`, computing the residual internally.
///
/// Costs two Hessian products (`H v` and `H r`), or one when the residual
/// turns out to be zero. Returns the step and whether it was clipped to
/// the ball boundary. Requires `|v| <= delta` (up to roundoff slack).
pub fn boundary_gradient_step(
    model: &QuadraticModel,
    delta: f64,
    v: &DenseVector,
) -> Result<(DenseVector, bool), SubproblemError> {
    check_inputs(model, delta, v)?;
    let hv = model.apply_h(v)?;
    let mut r = model.g().add(&hv);
    r.scale_in(-1.0);
    let mut m_delta = 0.0;
    let (u, used_boundary, _) = bgs_core(model, delta, v, &r, &mut m_delta)?;
    Ok((u, used_boundary))
}

/// Boundary gradient step from `v` with the residual `r = -(g + H v)`
/// supplied by the caller (one Hessian product instead of two).
///
/// The caller is trusted on `r`; the truncated CG solver maintains it by
/// recurrence, so no product is spent re-deriving it.
pub fn boundary_gradient_step_with_residual(
    model: &QuadraticModel,
    delta: f64,
    v: &DenseVector,
    r: &DenseVector,
) -> Result<(DenseVector, bool), SubproblemError> {
    check_inputs(model, delta, v)?;
    if r.len() != model.dim() {
        return Err(SubproblemError::InvalidArgument(format!(
            "residual has dimension {}, model has {}",
            r.len(),
            model.dim()
        )));
    }
    let mut m_delta = 0.0;
    let (u, used_boundary, _) = bgs_core(model, delta, v, r, &mut m_delta)?;
    Ok((u, used_boundary))
}

/// Shared implementation. Accumulates the model change `m(u) - m(v)`
/// into `m_delta` (using `<r, r>` for the descent inner product, exact
/// because the direction *is* the residual) and reports the Hessian
/// products spent, so the truncated CG solver's incremental accounting
/// extends through this step.
pub(crate) fn bgs_core(
    model: &QuadraticModel,
    delta: f64,
    v: &DenseVector,
    r: &DenseVector,
    m_delta: &mut f64,
) -> Result<(DenseVector, bool, u64), SubproblemError> {
    if r.is_zero() {
        return Ok((v.clone(), false, 0));
    }
    let hr = model.apply_h(r)?;
    let rr = r.dot(r);
    let rhr = dot(r, &hr)?;
    if rhr > 0.0 {
        let alpha = rr / rhr;
        let mut u = v.clone();
        u.axpy_in(alpha, r);
        if u.norm() < delta {
            *m_delta += -alpha * rr + 0.5 * alpha * alpha * rhr;
            return Ok((u, false, 1));
        }
    }
    let s = step_to_sphere(v, r, delta)?;
    let mut u = v.clone();
    u.axpy_in(s, r);
    *m_delta += -s * rr + 0.5 * s * s * rhr;
    Ok((u, true, 1))
}

fn check_inputs(
    model: &QuadraticModel,
    delta: f64,
    v: &DenseVector,
) -> Result<(), SubproblemError> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(SubproblemError::InvalidArgument(format!(
            "radius must be finite and positive, got {delta}"
        )));
    }
    if v.len() != model.dim() {
        return Err(SubproblemError::InvalidArgument(format!(
            "start point has dimension {}, model has {}",
            v.len(),
            model.dim()
        )));
    }
    let vnorm = v.norm();
    if vnorm > delta * (1.0 + NORM_SLACK) {
        return Err(SubproblemError::InvalidArgument(format!(
            "start point norm {vnorm} lies outside the ball of radius {delta}"
        )));
    }
    Ok(())
}
