//! Observed-versus-predicted bound diagnostics.
//!
//! Given a finished run (its summary entry plus the per-iteration CSV),
//! this module rebuilds the problem, evaluates the a-priori complexity
//! quantities, and lines them up against what the run actually did:
//! outer iterations against the two-phase outer bound, cumulative
//! Hessian-vector products against the inner-iteration budget, and the
//! first ε-critical iteration against the criticality estimate.
//!
//! The outer and inner bounds hold with probability `1 - 2δ` under
//! parameter couplings the experiment may or may not satisfy, so a
//! violation is reported as a *flag* — worth reading, not necessarily a
//! bug. The only hard failure is structural: the local-phase bound must
//! be monotone in ε, which is a property of the formula itself and
//! cannot be explained away by chance.

use std::fmt;

use rtr_solver::{compute_theory_bounds, SolverError, TheoryBounds, TrustRegionConfig};

use crate::csvio::CsvRow;
use crate::error::HarnessError;
use crate::spec::ExperimentSpec;
use crate::summary::RunSummary;

/// Confidence level δ used when evaluating the probabilistic bounds.
pub const DEFAULT_CONFIDENCE: f64 = 0.1;

/// Gradient threshold for the ε-criticality comparison.
pub const EPS_CRITICALITY: f64 = 0.1;

/// Outcome of one observed-versus-predicted comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    /// Observed value is within the predicted bound.
    Pass,
    /// A probabilistic bound was exceeded — a red flag, not proof of a
    /// bug.
    Flag,
    /// Informational only; nothing to gate on.
    Info,
    /// A structural property of the formulas failed; this is a bug.
    Fail,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Flag => "FLAG",
            CheckStatus::Info => "INFO",
            CheckStatus::Fail => "FAIL",
        };
        write!(f, "{tag}")
    }
}

/// One comparison line of a diagnostics report.
#[derive(Debug, Clone)]
pub struct BoundCheck {
    pub name: String,
    pub observed: f64,
    pub predicted: f64,
    pub status: CheckStatus,
    pub note: String,
}

/// Diagnostics for one run.
#[derive(Debug, Clone)]
pub struct DiagnosticsReport {
    pub run_id: String,
    pub variant: String,
    pub problem: String,
    pub checks: Vec<BoundCheck>,
    /// Constants the problem does not record, with the checks they
    /// disable.
    pub omissions: Vec<String>,
}

impl DiagnosticsReport {
    /// True when any structural check failed (CLI exit code 2).
    pub fn has_hard_failure(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Fail)
    }
}

impl fmt::Display for DiagnosticsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "run {} / variant {} — {}", self.run_id, self.variant, self.problem)?;
        for check in &self.checks {
            writeln!(
                f,
                "  [{}] {}: observed {} vs predicted {}{}",
                check.status,
                check.name,
                check.observed,
                check.predicted,
                if check.note.is_empty() {
                    String::new()
                } else {
                    format!("  ({})", check.note)
                }
            )?;
        }
        for omission in &self.omissions {
            writeln!(f, "  [OMIT] {omission}")?;
        }
        Ok(())
    }
}

/// Inner-iteration budget implied by the three-region analysis:
/// per-region sums plus two extra Hessian-vector products per outer
/// iteration.
fn inner_iteration_budget(
    bounds: &TheoryBounds,
    config: &TrustRegionConfig,
    dim: usize,
    l_g: f64,
    mu: f64,
    delta_confidence: f64,
    epsilon: f64,
) -> f64 {
    let denom = (config.omega1 * bounds.g_bar).min(config.omega2 * bounds.g_bar * bounds.g_bar);
    let t_lg = bounds.k_gn * (1.0 + (l_g * config.delta_bar).powi(2) / (denom * denom));
    let t_saddle = if config.sigma > 0.0 {
        let log_arg = 512.0 * l_g * l_g * bounds.r_bar * bounds.r_bar * bounds.k_gn * bounds.k_gn
            * dim as f64
            / (std::f64::consts::PI
                * config.sigma
                * config.sigma
                * delta_confidence
                * delta_confidence
                * mu
                * mu);
        bounds.k_gn * (2.0 + (l_g / (4.0 * mu)).sqrt() * log_arg.ln())
    } else {
        f64::INFINITY
    };
    let t_min = {
        let cond = (2.0 * l_g / mu).sqrt();
        let log_arg = cond * 16.0 * l_g * bounds.r_bar
            / (config.omega1 * mu * epsilon).min(config.omega2 * mu * mu * epsilon * epsilon);
        bounds.k_m_eps * (1.0 + cond * log_arg.ln())
    };
    t_lg + t_saddle + t_min + 2.0 * (bounds.k_gn + bounds.k_m_eps)
}

fn lookup_variant<'a>(
    spec: &'a ExperimentSpec,
    label: &str,
) -> Result<&'a TrustRegionConfig, HarnessError> {
    spec.variants
        .iter()
        .find(|v| v.label == label)
        .map(|v| &v.config)
        .ok_or_else(|| {
            HarnessError::InvalidSpec(format!(
                "summary names variant `{label}`, which the spec does not define"
            ))
        })
}

/// Compares one run against the a-priori bounds.
///
/// Missing problem constants produce a partial report that lists the
/// omission instead of failing; checks that need no constants (the
/// observed totals) are always present.
pub fn diagnose_bounds(
    spec: &ExperimentSpec,
    summary: &RunSummary,
    rows: &[CsvRow],
    delta_confidence: f64,
) -> Result<DiagnosticsReport, HarnessError> {
    let config = lookup_variant(spec, &summary.variant)?.clone();
    let instance = spec.problem.build()?;
    let dim = instance.dim();

    let mut report = DiagnosticsReport {
        run_id: summary.run_id.clone(),
        variant: summary.variant.clone(),
        problem: summary.problem.clone(),
        checks: Vec::new(),
        omissions: Vec::new(),
    };

    let observed_outer = rows.len() as f64;
    let observed_hvp = rows.last().map_or(0.0, |r| r.hvp_cum as f64);
    let final_grad = rows.last().map_or(f64::NAN, |r| r.grad_norm);

    let f0 = match rows.first() {
        Some(row) => row.f,
        None => {
            report.checks.push(BoundCheck {
                name: "outer_iterations".into(),
                observed: 0.0,
                predicted: f64::NAN,
                status: CheckStatus::Info,
                note: "run recorded no iterations; nothing to compare".into(),
            });
            return Ok(report);
        }
    };

    // Map the run's final gradient to a distance scale for the
    // local-phase bound: within the basin, ||g(x)|| <= L_G ||x - x*||,
    // so distance final_grad / L_G suffices to explain the gradient.
    let l_g = instance.constants.l_g;
    let epsilon_run = match l_g {
        Some(l_g) if final_grad > 0.0 => (final_grad / l_g).max(1e-300),
        _ => EPS_CRITICALITY,
    };

    let bounds = match compute_theory_bounds(
        &instance.constants,
        &config,
        dim,
        f0,
        delta_confidence,
        epsilon_run,
    ) {
        Ok(b) => b,
        Err(SolverError::MissingConstant(name)) => {
            report.omissions.push(format!(
                "constant `{name}` is not recorded for this problem; bound checks skipped"
            ));
            report.checks.push(BoundCheck {
                name: "outer_iterations".into(),
                observed: observed_outer,
                predicted: f64::NAN,
                status: CheckStatus::Info,
                note: "no prediction available".into(),
            });
            report.checks.push(BoundCheck {
                name: "hvp_total".into(),
                observed: observed_hvp,
                predicted: f64::NAN,
                status: CheckStatus::Info,
                note: "no prediction available".into(),
            });
            return Ok(report);
        }
        Err(other) => return Err(other.into()),
    };
    // compute_theory_bounds succeeded, so these are all recorded.
    let l_g = instance.constants.l_g.expect("checked above");
    let mu = instance.constants.mu.expect("checked above");

    let sigma_note = if bounds.sigma_ok {
        format!("sigma = {} satisfies the analysis couplings", config.sigma)
    } else {
        format!(
            "sigma = {} is outside the analysis couplings (sigma_bar = {}); \
             bounds are indicative only",
            config.sigma, bounds.sigma_bar
        )
    };

    let outer_predicted = bounds.k_gn + bounds.k_m_eps;
    report.checks.push(BoundCheck {
        name: "outer_iterations".into(),
        observed: observed_outer,
        predicted: outer_predicted,
        status: if observed_outer <= outer_predicted {
            CheckStatus::Pass
        } else {
            CheckStatus::Flag
        },
        note: format!("probabilistic bound at confidence {delta_confidence}; {sigma_note}"),
    });

    let hvp_predicted =
        inner_iteration_budget(&bounds, &config, dim, l_g, mu, delta_confidence, epsilon_run);
    report.checks.push(BoundCheck {
        name: "hvp_total".into(),
        observed: observed_hvp,
        predicted: hvp_predicted,
        status: if observed_hvp <= hvp_predicted {
            CheckStatus::Pass
        } else {
            CheckStatus::Flag
        },
        note: "three-region inner-iteration budget plus 2 per outer iteration".into(),
    });

    // First iteration whose gradient is already epsilon-small, against
    // the criticality estimate evaluated at the same epsilon.
    let crit_bounds = compute_theory_bounds(
        &instance.constants,
        &config,
        dim,
        f0,
        delta_confidence,
        EPS_CRITICALITY,
    )?;
    match rows.iter().position(|r| r.grad_norm <= EPS_CRITICALITY) {
        Some(k) => {
            let observed = k as f64;
            report.checks.push(BoundCheck {
                name: format!("first_k_grad_below_{EPS_CRITICALITY}"),
                observed,
                predicted: crit_bounds.eps_criticality_bound,
                status: if observed <= crit_bounds.eps_criticality_bound {
                    CheckStatus::Pass
                } else {
                    CheckStatus::Flag
                },
                note: "criticality estimate".into(),
            });
        }
        None => report.checks.push(BoundCheck {
            name: format!("first_k_grad_below_{EPS_CRITICALITY}"),
            observed: f64::NAN,
            predicted: crit_bounds.eps_criticality_bound,
            status: CheckStatus::Info,
            note: "run never reached the threshold".into(),
        }),
    }

    // Structural: the local-phase count can only grow as epsilon
    // shrinks. Checked on a geometric grid; any inversion is a bug in
    // the formulas, not a matter of luck.
    let mut previous = f64::NEG_INFINITY;
    let mut monotone = true;
    let mut grid_note = String::new();
    for j in 0..=24 {
        let eps = bounds.r_bar * 2f64.powi(-j);
        let b = compute_theory_bounds(
            &instance.constants,
            &config,
            dim,
            f0,
            delta_confidence,
            eps,
        )?;
        if b.k_m_eps < previous - 1e-12 {
            monotone = false;
            grid_note = format!("inversion at epsilon = {eps}");
            break;
        }
        previous = b.k_m_eps;
    }
    report.checks.push(BoundCheck {
        name: "k_m_eps_monotone_in_eps".into(),
        observed: if monotone { 1.0 } else { 0.0 },
        predicted: 1.0,
        status: if monotone {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        note: if monotone {
            format!("checked on 25 epsilon levels down from r_bar = {}", bounds.r_bar)
        } else {
            grid_note
        },
    });

    Ok(report)
}
