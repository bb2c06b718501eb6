use std::f64::consts::PI;

use rtr_core::{DenseVector, ObjectiveOracle, ProblemConstants};

use crate::error::ProblemError;
use crate::instance::{ProblemDescriptor, ProblemInstance};

/// The canonical hard instance behind the deterministic lower bound: a
/// quadratic bowl in the first `d - 1` coordinates and a cosine valley in
/// the last,
///
/// ```text
/// f(x) = 1/2 sum_{i < d} x_i^2 + cos(x_d) - 1.
/// ```
///
/// The origin is a strict saddle (`f(0) = 0`, Hessian `diag(1, ..., 1, -1)`
/// with exactly one negative eigenvalue), and the global minimum `-2` is
/// attained at `(0, ..., 0, (2k+1) pi)` — distance exactly `pi` from the
/// saddle for `k = 0`. Every regularity constant is explicit: `L_G = 1`,
/// `L_H = 1`, `mu = 1`, lower bound `-2`, and the strong-gradient pair
/// `gamma_s = 1/(2 pi)`, `R_s = 1/4`.
///
/// The adversary experiments reveal a rotated copy of this landscape; the
/// axis-aligned version built here is the same function in the coordinate
/// system where the hidden valley direction is the last basis vector.
pub fn make_worst_case_cosine(d: usize) -> Result<ProblemInstance, ProblemError> {
    if d < 1 {
        return Err(ProblemError::InvalidParameter(
            "worst-case cosine needs dimension at least 1".into(),
        ));
    }

    let last = d - 1;

    let value = Box::new(move |x: &[f64]| {
        let quad: f64 = x[..last].iter().map(|xi| xi * xi).sum();
        0.5 * quad + x[last].cos() - 1.0
    });

    let grad = Box::new(move |x: &[f64]| {
        let mut g = x.to_vec();
        g[last] = -x[last].sin();
        g
    });

    let hvp = Box::new(move |x: &[f64], u: &[f64]| {
        let mut out = u.to_vec();
        out[last] = -x[last].cos() * u[last];
        out
    });

    let oracle = ObjectiveOracle::new(d, value, grad, hvp)?;

    let constants = ProblemConstants::new()
        .with_f_low(-2.0)
        .with_l_g(1.0)
        .with_l_h(1.0)
        .with_mu(1.0)
        .with_gamma_s(1.0 / (2.0 * PI))
        .with_r_s(0.25);

    let minimizer = DenseVector::from_fn(d, |i| if i == last { PI } else { 0.0 })?;

    Ok(ProblemInstance {
        oracle,
        constants,
        known_minimum_value: Some(-2.0),
        known_saddle: Some(DenseVector::zeros(d)),
        known_minimizer: Some(minimizer),
        descriptor: ProblemDescriptor::new("worst_case_cosine", vec![("d", d.to_string())], None),
    })
}
