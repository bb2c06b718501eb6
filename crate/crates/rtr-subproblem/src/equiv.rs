//! Warm-start/shift equivalence check.
//!
//! Conjugate gradient on `m(v) = <g, v> + 1/2 <v, H v>` started at `xi`
//! produces, in exact arithmetic, the same iterates as CG on the shifted
//! model `m~(w) = <g + H xi, w> + 1/2 <w, H w>` started at the origin and
//! translated back by `xi`: both recurrences see the identical initial
//! residual `-(g + H xi)` and the identical operator. This is the fact
//! that lets the warm-started solver inherit all of standard CG's Krylov
//! structure.
//!
//! [`check_cg_shift_equivalence`] verifies the identity numerically on a
//! concrete model. To make the comparison informative, the warm-started
//! run recomputes its residual *explicitly* at every iterate
//! (`r = -(g + H v)`) while the shifted run maintains it by the usual
//! recurrence; the two agree only when the callback behaves as a fixed
//! linear operator, so the check catches e.g. an accidental dependence on
//! the evaluation point or a stale captured state.

use crate::error::SubproblemError;
use crate::model::QuadraticModel;
use rtr_core::{dot, DenseVector};

/// Relative tolerance for the entrywise iterate comparison.
const EQUIV_RTOL: f64 = 1e-9;

/// Runs plain CG twice — warm-started on `m` with explicit residuals,
/// zero-started on the shifted model with recurrence residuals — and
/// compares iterates entrywise through `steps` iterations.
///
/// Returns `true` iff every pair agrees to relative tolerance `1e-9`
/// (denominator `max(1, |a|, |b|)` per entry). Comparison covers the
/// iterates both runs actually produced: if CG breaks down early (zero
/// residual or nonpositive curvature, at the same iteration in exact
/// arithmetic), the shorter prefix is compared. Costs `O(steps)` Hessian
/// products; intended for tests and diagnostics, not hot loops.
pub fn check_cg_shift_equivalence(
    model: &QuadraticModel,
    xi: &DenseVector,
    steps: usize,
) -> Result<bool, SubproblemError> {
    let dim = model.dim();
    if xi.len() != dim {
        return Err(SubproblemError::InvalidArgument(format!(
            "start point has dimension {}, model has {}",
            xi.len(),
            dim
        )));
    }
    if steps == 0 {
        return Err(SubproblemError::InvalidArgument(
            "steps must be at least 1".into(),
        ));
    }

    let direct = cg_iterates(model, model.g(), xi, steps, ResidualRule::Explicit)?;

    let h_xi = if xi.is_zero() {
        DenseVector::zeros(dim)
    } else {
        model.apply_h(xi)?
    };
    let g_shifted = model.g().add(&h_xi);
    let origin = DenseVector::zeros(dim);
    let shifted = cg_iterates(model, &g_shifted, &origin, steps, ResidualRule::Recurrence)?;

    let n = direct.len().min(shifted.len());
    for t in 0..n {
        let translated = xi.add(&shifted[t]);
        for i in 0..dim {
            let a = direct[t][i];
            let b = translated[i];
            if (a - b).abs() > EQUIV_RTOL * a.abs().max(b.abs()).max(1.0) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ResidualRule {
    /// `r = -(g + H v)`, re-evaluated at every iterate (one extra product
    /// per iteration; immune to a lying callback).
    Explicit,
    /// `r <- r - alpha H p`, the standard CG recurrence.
    Recurrence,
}

/// Textbook CG on `<g, v> + 1/2 <v, H v>` from `start`, collecting
/// `start, v^(1), ..., v^(k)` until `steps` iterations, a zero residual,
/// or nonpositive curvature (no truncation — this is the unconstrained
/// recurrence).
fn cg_iterates(
    model: &QuadraticModel,
    g: &DenseVector,
    start: &DenseVector,
    steps: usize,
    rule: ResidualRule,
) -> Result<Vec<DenseVector>, SubproblemError> {
    let mut v = start.clone();
    let h_start = if start.is_zero() {
        DenseVector::zeros(start.len())
    } else {
        model.apply_h(start)?
    };
    let mut r = g.add(&h_start);
    r.scale_in(-1.0);
    let mut out = vec![v.clone()];
    let mut rr = r.dot(&r);
    if rr == 0.0 {
        return Ok(out);
    }
    let mut p = r.clone();
    for _ in 0..steps {
        let hp = model.apply_h(&p)?;
        let php = dot(&p, &hp)?;
        if php <= 0.0 {
            break;
        }
        let alpha = rr / php;
        v.axpy_in(alpha, &p);
        match rule {
            ResidualRule::Recurrence => r.axpy_in(-alpha, &hp),
            ResidualRule::Explicit => {
                let hv = model.apply_h(&v)?;
                r = g.add(&hv);
                r.scale_in(-1.0);
            }
        }
        out.push(v.clone());
        let rr_next = r.dot(&r);
        if rr_next == 0.0 {
            break;
        }
        let beta = rr_next / rr;
        p.scale_in(beta);
        p.axpy_in(1.0, &r);
        rr = rr_next;
    }
    Ok(out)
}
