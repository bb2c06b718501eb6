use std::f64::consts::PI;
use std::sync::Arc;

use rtr_core::{DenseVector, DeterministicRng, ObjectiveOracle, ProblemConstants};

use crate::cache::PointCache;
use crate::error::ProblemError;
use crate::instance::{ProblemDescriptor, ProblemInstance};
use crate::PROBLEM_RNG_STREAM;

/// The fixed first weight: a single slightly-negative term that plants a
/// strict saddle of value `1e-2` at the origin.
const SADDLE_WEIGHT: f64 = -1e-2;

/// A separable trigonometric landscape with a strict saddle at the origin.
///
/// ```text
/// f(x) = -w_1 + sum_i w_i sin(x_i)^2,    w_1 = -1e-2, w_2..w_d iid U[1, 2]
/// ```
///
/// The gradient is `w_i sin(2 x_i)` per coordinate and the Hessian is the
/// diagonal `2 diag(w_i cos(2 x_i))`, applied matrix-free (the diagonal is
/// memoized per point, so repeated products at one model point cost one
/// pass of multiplications each). A point is critical exactly when every
/// `sin(2 x_i)` vanishes, i.e. on the lattice `(pi/2) Z^d`; at every
/// critical point the Hessian is `+-2 w_i` per coordinate, so the
/// landscape is Morse with `mu = 2 min_i |w_i| = 2e-2`.
///
/// The origin is the canonical strict saddle: `f(0) = -w_1 = 1e-2`, zero
/// gradient, and exactly one negative Hessian eigenvalue `2 w_1 = -2e-2`.
/// The minimum value is `0`, attained e.g. at `(pi/2, 0, ..., 0)` where
/// the sole negative term is fully activated.
///
/// Shipped constants, from the sampled weights:
///
/// * `L_G = 2 max_i w_i <= 4` and `L_H = 4 max_i w_i <= 8` (the diagonal
///   entries and their derivatives are bounded by `2 w_i` and `4 w_i`);
/// * `mu = 2 min_i |w_i| = 2e-2`;
/// * strong gradient: `|w_i sin(2 x_i)| >= w_i (4/pi) dist(x_i, (pi/2)Z)`
///   since `|sin t| >= (2/pi) dist(t, pi Z)`, so any `x` at distance
///   `R_s = pi/8` from the critical lattice has gradient norm at least
///   `gamma_s = (4/pi) (pi/8) min_i |w_i| = 5e-3`.
pub fn make_sine_saddle(d: usize, seed: u64) -> Result<ProblemInstance, ProblemError> {
    if d < 2 {
        return Err(ProblemError::InvalidParameter(format!(
            "sine saddle needs dimension at least 2, got {d}"
        )));
    }

    let mut rng = DeterministicRng::new(seed, PROBLEM_RNG_STREAM);
    let mut weights = Vec::with_capacity(d);
    weights.push(SADDLE_WEIGHT);
    for _ in 1..d {
        weights.push(rng.uniform_in(1.0, 2.0));
    }
    let weights = Arc::new(weights);

    let w_max = weights.iter().fold(0.0_f64, |m, w| m.max(w.abs()));
    let w_min = weights.iter().fold(f64::INFINITY, |m, w| m.min(w.abs()));

    let w_value = Arc::clone(&weights);
    let value = Box::new(move |x: &[f64]| {
        let sum: f64 = x
            .iter()
            .zip(w_value.iter())
            .map(|(xi, wi)| wi * xi.sin().powi(2))
            .sum();
        sum - w_value[0]
    });

    let w_grad = Arc::clone(&weights);
    let grad = Box::new(move |x: &[f64]| {
        x.iter()
            .zip(w_grad.iter())
            .map(|(xi, wi)| wi * (2.0 * xi).sin())
            .collect()
    });

    let w_hvp = Arc::clone(&weights);
    let diag_cache: Arc<PointCache<Vec<f64>>> = Arc::new(PointCache::new());
    let hvp = Box::new(move |x: &[f64], u: &[f64]| {
        let diag = diag_cache.get_or_build(x, |x| {
            x.iter()
                .zip(w_hvp.iter())
                .map(|(xi, wi)| 2.0 * wi * (2.0 * xi).cos())
                .collect()
        });
        diag.iter().zip(u).map(|(h, ui)| h * ui).collect()
    });

    let oracle = ObjectiveOracle::new(d, value, grad, hvp)?;

    let constants = ProblemConstants::new()
        .with_f_low(0.0)
        .with_l_g(2.0 * w_max)
        .with_l_h(4.0 * w_max)
        .with_mu(2.0 * w_min)
        .with_gamma_s(0.5 * w_min)
        .with_r_s(PI / 8.0);

    let minimizer = DenseVector::from_fn(d, |i| if i == 0 { PI / 2.0 } else { 0.0 })?;

    Ok(ProblemInstance {
        oracle,
        constants,
        known_minimum_value: Some(0.0),
        known_saddle: Some(DenseVector::zeros(d)),
        known_minimizer: Some(minimizer),
        descriptor: ProblemDescriptor::new(
            "sine_saddle",
            vec![("d", d.to_string())],
            Some(seed),
        ),
    })
}
