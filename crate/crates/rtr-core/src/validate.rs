use crate::error::CoreError;
use crate::oracle::ObjectiveOracle;
use crate::rng::DeterministicRng;
use crate::vector::DenseVector;

/// Default central-difference step for [`validate_oracle`].
pub const DEFAULT_VALIDATION_STEP: f64 = 1e-5;

/// Outcome of an oracle self-consistency check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    /// Worst relative error between `<grad f(x), u>` and the central
    /// difference of `f` along `u`, over all probes.
    pub max_grad_rel_err: f64,
    /// Worst relative error between `hess f(x) u` and the central difference
    /// of `grad f` along `u`, over all probes.
    pub max_hvp_rel_err: f64,
    /// Number of probe directions used.
    pub probes: usize,
    /// Central-difference step used.
    pub step: f64,
}

/// Cross-checks an oracle's three closures against each other with central
/// differences at `point`, along `n_probes` deterministic unit directions.
///
/// For each probe direction `u`:
///
/// - `(f(x + h u) - f(x - h u)) / 2h` is compared to `<grad f(x), u>`;
/// - `(grad f(x + h u) - grad f(x - h u)) / 2h` is compared to
///   `hess f(x) u`.
///
/// Relative errors are measured against `max(1, |a|, |b|)` so the check
/// stays meaningful when a derivative happens to be small; at generic
/// O(1)-scale points this is an ordinary relative error.
///
/// Probe directions come from a fixed internal random stream: two calls with
/// equal arguments always probe the same directions.
pub fn validate_oracle(
    oracle: &ObjectiveOracle,
    point: &DenseVector,
    n_probes: usize,
    step: f64,
) -> Result<ValidationReport, CoreError> {
    if n_probes == 0 {
        return Err(CoreError::InvalidArgument(
            "validate_oracle requires at least one probe".into(),
        ));
    }
    if !step.is_finite() || step <= 0.0 {
        return Err(CoreError::InvalidArgument(format!(
            "validate_oracle step must be finite and positive, got {step}"
        )));
    }

    let d = oracle.dim();
    let mut rng = DeterministicRng::new(0x5641_4C49_44, 0);
    let grad_at_x = oracle.grad(point)?;

    let mut max_grad_rel_err: f64 = 0.0;
    let mut max_hvp_rel_err: f64 = 0.0;

    for _ in 0..n_probes {
        let u = rng.unit_sphere(d);
        let mut x_plus = point.clone();
        x_plus.axpy_in(step, &u);
        let mut x_minus = point.clone();
        x_minus.axpy_in(-step, &u);

        // Value vs gradient.
        let f_plus = oracle.value(&x_plus)?;
        let f_minus = oracle.value(&x_minus)?;
        let fd = (f_plus - f_minus) / (2.0 * step);
        let exact = grad_at_x.dot(&u);
        let denom = 1.0_f64.max(fd.abs()).max(exact.abs());
        max_grad_rel_err = max_grad_rel_err.max((fd - exact).abs() / denom);

        // Gradient vs Hessian-vector product.
        let g_plus = oracle.grad(&x_plus)?;
        let g_minus = oracle.grad(&x_minus)?;
        let mut fd_vec = g_plus.sub(&g_minus);
        fd_vec.scale_in(1.0 / (2.0 * step));
        let exact_vec = oracle.hvp(point, &u)?;
        let diff = fd_vec.sub(&exact_vec).norm();
        let denom = 1.0_f64.max(fd_vec.norm()).max(exact_vec.norm());
        max_hvp_rel_err = max_hvp_rel_err.max(diff / denom);
    }

    Ok(ValidationReport {
        max_grad_rel_err,
        max_hvp_rel_err,
        probes: n_probes,
        step,
    })
}
