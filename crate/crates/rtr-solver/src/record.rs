//! Per-iteration records and the run report.

use rtr_core::{CounterSnapshot, DenseVector};
use rtr_subproblem::StopReason;

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminationReason {
    /// An accepted iterate met the gradient tolerance.
    GradTol,
    /// The outer iteration budget ran out.
    MaxOuter,
}

impl std::fmt::Display for TerminationReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TerminationReason::GradTol => write!(f, "GRAD_TOL"),
            TerminationReason::MaxOuter => write!(f, "MAX_OUTER"),
        }
    }
}

/// Everything observable about one outer iteration.
///
/// Cumulative counters (`hvp_cum`, `f_cum`, `grad_cum`) are oracle-level
/// totals *including* the run's initial value/gradient evaluations, so
/// they are monotone across the run and the last record matches the
/// report totals. `wall_ms` is cumulative wall-clock time at the end of
/// the iteration (`NaN` when the record was produced by a bare step
/// outside a timed run); it is the one field excluded from
/// [`IterationRecord::deterministic_eq`].
#[derive(Debug, Clone)]
pub struct IterationRecord {
    /// Iteration index `k`, from 0.
    pub k: usize,
    /// Objective value at the iteration's starting point `x_k`.
    pub f_value: f64,
    /// Gradient norm at `x_k`.
    pub grad_norm: f64,
    /// Shifted improvement ratio; `NaN` when the model decrease was too
    /// small to divide by (treated as unsuccessful).
    pub rho: f64,
    /// Model value of the perturbation, `theta = <g, xi> + 1/2 <H xi, xi>`
    /// (`0` for the deterministic variants).
    pub theta: f64,
    /// Whether the step was accepted (`rho >= rho_prime`).
    pub accepted: bool,
    /// How the subproblem stopped.
    pub stop_reason: StopReason,
    /// Trust radius used by this iteration.
    pub delta_before: f64,
    /// Trust radius after the update rule.
    pub delta_after: f64,
    /// Subproblem CG iterations `T_k`.
    pub inner_iters: usize,
    /// Cumulative Hessian-vector products after this iteration.
    pub hvp_cum: u64,
    /// Cumulative objective evaluations after this iteration.
    pub f_cum: u64,
    /// Cumulative gradient evaluations after this iteration.
    pub grad_cum: u64,
    /// Norm of the sampled perturbation (`0` for deterministic variants).
    pub xi_norm: f64,
    /// Subproblem model decrease `m(xi) - m(u)` — the ratio's denominator.
    pub model_decrease: f64,
    /// Cumulative wall-clock milliseconds (see type-level docs).
    pub wall_ms: f64,
    /// Rayleigh quotient of the *unshifted* Hessian along `xi`
    /// (`NaN` for deterministic variants) — an observed curvature sample
    /// used by the smoothness-estimate diagnostics.
    pub xi_curvature: f64,
    /// Initial subproblem residual norm `|g + H xi|`.
    pub r0_norm: f64,
}

impl IterationRecord {
    /// Field-by-field equality with floats compared bitwise (so NaN
    /// fields compare equal to themselves) and `wall_ms` ignored — the
    /// relation "these two runs behaved identically".
    pub fn deterministic_eq(&self, other: &IterationRecord) -> bool {
        let feq = |a: f64, b: f64| a.to_bits() == b.to_bits();
        self.k == other.k
            && feq(self.f_value, other.f_value)
            && feq(self.grad_norm, other.grad_norm)
            && feq(self.rho, other.rho)
            && feq(self.theta, other.theta)
            && self.accepted == other.accepted
            && self.stop_reason == other.stop_reason
            && feq(self.delta_before, other.delta_before)
            && feq(self.delta_after, other.delta_after)
            && self.inner_iters == other.inner_iters
            && self.hvp_cum == other.hvp_cum
            && self.f_cum == other.f_cum
            && self.grad_cum == other.grad_cum
            && feq(self.xi_norm, other.xi_norm)
            && feq(self.model_decrease, other.model_decrease)
            && feq(self.xi_curvature, other.xi_curvature)
            && feq(self.r0_norm, other.r0_norm)
    }
}

/// Full output of a trust-region run.
#[derive(Debug, Clone)]
pub struct RunReport {
    /// One record per outer iteration, in order.
    pub records: Vec<IterationRecord>,
    /// Final iterate.
    pub final_point: DenseVector,
    /// FNV-1a digest of the final iterate's bit pattern — a compact
    /// fingerprint for reproducibility checks across runs and machines.
    pub final_point_digest: String,
    /// Objective value at the final iterate.
    pub final_f: f64,
    /// Gradient norm at the final iterate.
    pub final_grad_norm: f64,
    /// Oracle call totals for the run (equal to the last record's
    /// cumulative counters).
    pub totals: CounterSnapshot,
    /// Total wall-clock milliseconds.
    pub wall_time_ms: f64,
    /// Why the run stopped.
    pub terminated_by: TerminationReason,
    /// Iterate history `x_0, ..., x_K` when `keep_iterates` was set.
    pub iterates: Option<Vec<DenseVector>>,
    /// Sampled perturbations per iteration when `keep_xi` was set (the
    /// zero vector on deterministic iterations).
    pub xi_log: Option<Vec<DenseVector>>,
}

/// FNV-1a (64-bit) over the little-endian bit patterns of the entries,
/// rendered as 16 hex digits. Bitwise-identical vectors — and only those
/// — share a digest, which is the property reproducibility tests need.
pub fn point_digest(x: &DenseVector) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &v in x.iter() {
        for b in v.to_bits().to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    format!("{h:016x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable_and_sensitive() {
        let a = DenseVector::new(vec![1.0, 2.0, 3.0]).unwrap();
        let b = DenseVector::new(vec![1.0, 2.0, 3.0]).unwrap();
        let c = DenseVector::new(vec![1.0, 2.0, 3.0 + 1e-15]).unwrap();
        assert_eq!(point_digest(&a), point_digest(&b));
        assert_ne!(point_digest(&a), point_digest(&c));
        // Signed zeros differ bitwise, and the digest must see that.
        let z1 = DenseVector::new(vec![0.0]).unwrap();
        let z2 = DenseVector::new(vec![-0.0]).unwrap();
        assert_ne!(point_digest(&z1), point_digest(&z2));
    }

    #[test]
    fn termination_reasons_render_like_the_csv_vocabulary() {
        assert_eq!(TerminationReason::GradTol.to_string(), "GRAD_TOL");
        assert_eq!(TerminationReason::MaxOuter.to_string(), "MAX_OUTER");
    }
}
