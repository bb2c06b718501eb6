//! Ball geometry shared by the solvers.

use crate::error::SubproblemError;
use rtr_core::DenseVector;

/// Nonnegative root `s` of `|v + s p| = rho`: the step length that carries
/// `v` to the sphere of radius `rho` along the direction `p`.
///
/// For `|v| <= rho` and `p != 0` the quadratic
/// `|p|^2 s^2 + 2 <v, p> s + (|v|^2 - rho^2) = 0`
/// has exactly one nonnegative root,
///
/// ```text
/// s = (-<v, p> + sqrt(<v, p>^2 + |p|^2 (rho^2 - |v|^2))) / |p|^2,
/// ```
///
/// clamped at zero against roundoff when `v` already sits on the sphere.
///
/// The root is evaluated in a rescaled frame — `v` divided by `rho`, `p`
/// by its own norm — rather than on the raw quadratic. The formula is
/// scale-invariant, but its raw terms are not: a trust region that has
/// been quartered a few hundred times in a row puts `rho^2`, `|v|^2` and
/// `<v, p>^2` in the subnormal range, where the discriminant's
/// cancellation is evaluated with only a handful of mantissa bits and
/// the computed point can miss the sphere by several percent. Scaling
/// the vectors (componentwise, before any dot product) keeps every
/// intermediate near unit size, so the root stays accurate for any
/// representable `rho`.
///
/// A zero direction is unreachable from the solvers — it would imply a
/// zero residual, which stops them earlier — so it is reported as an
/// invariant violation rather than handled.
pub(crate) fn step_to_sphere(
    v: &DenseVector,
    p: &DenseVector,
    rho: f64,
) -> Result<f64, SubproblemError> {
    let p_norm = p.norm();
    if p_norm == 0.0 {
        return Err(SubproblemError::InvariantViolation(
            "attempted to extend a zero direction to the sphere".into(),
        ));
    }
    let v_scaled = v.scaled(1.0 / rho);
    let p_scaled = p.scaled(1.0 / p_norm);
    let c = v_scaled.dot(&p_scaled);
    let vv = v_scaled.dot(&v_scaled);
    let disc = c * c + (1.0 - vv);
    let sigma = -c + disc.max(0.0).sqrt();
    Ok((sigma * (rho / p_norm)).max(0.0))
}
