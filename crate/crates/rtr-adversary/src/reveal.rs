//! Constructing the hidden function a finished transcript is consistent
//! with.

use std::f64::consts::PI;
use std::sync::Arc;

use rtr_core::{DenseVector, ObjectiveOracle, ProblemConstants};
use rtr_problems::{ProblemDescriptor, ProblemInstance};

use crate::error::AdversaryError;
use crate::log::QueryLog;

fn dot_slices(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthogonal projection of `x` onto the span of an orthonormal `basis`.
fn project(basis: &[DenseVector], x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; x.len()];
    for b in basis {
        let c = dot_slices(b.as_slice(), x);
        for (o, bi) in out.iter_mut().zip(b.iter()) {
            *o += c * bi;
        }
    }
    out
}

/// Reveals a smooth function that reproduces every answer in the
/// transcript yet attains the value `-2` a distance `pi` from the origin.
///
/// With `V` the orthogonal projector onto the query span and `q` a unit
/// vector orthogonal to it, the revealed function is
///
/// ```text
/// f(x) = 1/2 |V x|^2 + cos(q' x) - 1,
/// grad f(x) = V x - sin(q' x) q,
/// hess f(x) u = V u - cos(q' x) <q, u> q.
/// ```
///
/// Every logged vector lies in the span, where `V` is the identity and
/// `q' x` vanishes, so `f` restricts there to the quadratic `|x|^2 / 2`
/// whose derivatives are exactly the oracle's answers. Off the span, the
/// cosine digs a valley: `|V x|^2 / 2 >= 0` and `cos - 1 >= -2` are both
/// attained at `x* = pi q`, giving `f(x*) = -2` at `|x*| = pi`. The origin
/// is a critical point with curvature `-1` along `q` — the saddle the
/// escape experiment launches from.
///
/// `q` is built from the first coordinate axis with a substantial
/// component outside the span (one must exist: the residuals of the `d`
/// axes have squared norms summing to `d - span_dim`, so some axis clears
/// `1/(2 sqrt(d))`), orthogonalized and normalized. Against the
/// double-pass Gram–Schmidt basis this leaves `|<q, basis>|` at working
/// precision, which is what keeps the replayed answers within `1e-12` of
/// the logged ones for unit-scale queries.
///
/// The constants `L_G = L_H = 1` and `f_low = -2` always hold (the
/// Hessian above has eigenvalues in `[-1, 1]`, and only the cosine term
/// varies). The Morse constant and the strong-gradient pair are only
/// attached when `span_dim + 1 = d`: otherwise the Hessian is singular
/// along the `d - span_dim - 1` directions the construction never uses.
///
/// Errors with [`AdversaryError::FullSpan`] when the queries span all of
/// `R^d`, and with `InvalidArgument` when `d` disagrees with the log.
pub fn reveal_hidden_function(
    log: &QueryLog,
    d: usize,
) -> Result<ProblemInstance, AdversaryError> {
    if d != log.dim() {
        return Err(AdversaryError::InvalidArgument(format!(
            "reveal dimension {d} does not match the log dimension {}",
            log.dim()
        )));
    }
    let span_dim = log.span_dim();
    if span_dim >= d {
        return Err(AdversaryError::FullSpan { span_dim, dim: d });
    }

    // First coordinate axis with a residual clearing the pigeonhole floor.
    let floor = 0.5 / (d as f64).sqrt();
    let mut q = None;
    for t in 0..d {
        let axis = DenseVector::from_fn(d, |j| if j == t { 1.0 } else { 0.0 })?;
        let mut res = log.residual(&axis);
        let norm = res.norm();
        if norm >= floor {
            res.scale_in(1.0 / norm);
            q = Some(res);
            break;
        }
    }
    // Unreachable while span_dim < d; kept as a defensive error rather
    // than a panic because it guards a floating-point argument.
    let q = q.ok_or_else(|| {
        AdversaryError::InvalidArgument(
            "no coordinate axis has a residual outside the query span".into(),
        )
    })?;

    let basis: Arc<Vec<DenseVector>> = Arc::new(log.span_basis().to_vec());
    let q = Arc::new(q);

    let (b_v, q_v) = (Arc::clone(&basis), Arc::clone(&q));
    let value_fn = Box::new(move |x: &[f64]| {
        let px = project(&b_v, x);
        let t = dot_slices(q_v.as_slice(), x);
        0.5 * dot_slices(&px, &px) + t.cos() - 1.0
    });

    let (b_g, q_g) = (Arc::clone(&basis), Arc::clone(&q));
    let grad_fn = Box::new(move |x: &[f64]| {
        let mut g = project(&b_g, x);
        let s = dot_slices(q_g.as_slice(), x).sin();
        for (gi, qi) in g.iter_mut().zip(q_g.iter()) {
            *gi -= s * qi;
        }
        g
    });

    let (b_h, q_h) = (Arc::clone(&basis), Arc::clone(&q));
    let hvp_fn = Box::new(move |x: &[f64], u: &[f64]| {
        let mut out = project(&b_h, u);
        let c = dot_slices(q_h.as_slice(), x).cos() * dot_slices(q_h.as_slice(), u);
        for (oi, qi) in out.iter_mut().zip(q_h.iter()) {
            *oi -= c * qi;
        }
        out
    });

    let oracle = ObjectiveOracle::new(d, value_fn, grad_fn, hvp_fn)?;

    let mut constants = ProblemConstants::new()
        .with_f_low(-2.0)
        .with_l_g(1.0)
        .with_l_h(1.0);
    if span_dim + 1 == d {
        // Full-rank case: at critical points the Hessian eigenvalues are
        // 1 on the span and -cos(q'x) = ±1 along q, so the landscape is
        // the worst-case cosine in rotated coordinates, constants and all.
        constants = constants.with_mu(1.0).with_gamma_s(0.5 / PI).with_r_s(0.25);
    }

    let minimizer = DenseVector::from_fn(d, |i| PI * q[i])?;
    let descriptor = ProblemDescriptor {
        name: "revealed_cosine",
        params: vec![
            ("d", d.to_string()),
            ("span_dim", span_dim.to_string()),
        ],
        seed: None,
    };

    Ok(ProblemInstance {
        oracle,
        constants,
        known_minimum_value: Some(-2.0),
        known_saddle: Some(DenseVector::zeros(d)),
        known_minimizer: Some(minimizer),
        descriptor,
    })
}
