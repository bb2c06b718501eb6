//! End-to-end smoke battery behind `rtr selftest`.
//!
//! Miniature versions of the full test pyramid, sized to finish in a
//! few seconds on one core: oracle self-consistency for every problem
//! family, subproblem sanity on known quadratics, solver determinism,
//! the four-variant descent comparison, the query-log adversary, the
//! perturbation sampler's distribution, and a CSV round-trip. Each item
//! prints one `[selftest] name: ok` line; the first failure aborts with
//! an invariant error (CLI exit code 2).

use rtr_adversary::{run_adversary_experiment, WrappedTrustRegion};
use rtr_core::{validate_oracle, DenseVector, DeterministicRng, DEFAULT_VALIDATION_STEP};
use rtr_solver::{tr_run, SolverError, StopReason};
use rtr_subproblem::{tcg_bg, tcg_classic, QuadraticModel};

use crate::csvio;
use crate::error::HarnessError;
use crate::run::run_experiment;
use crate::spec::ExperimentSpec;
use crate::stats::{ks_distance, AbsDotDistribution};

fn fail(name: &str, detail: String) -> HarnessError {
    HarnessError::Invariant(format!("selftest `{name}`: {detail}"))
}

fn check(name: &str, ok: bool, detail: impl FnOnce() -> String) -> Result<(), HarnessError> {
    if ok {
        Ok(())
    } else {
        Err(fail(name, detail()))
    }
}

fn oracle_consistency() -> Result<(), HarnessError> {
    let name = "oracle_consistency";
    let families = [
        "problem = sine_saddle\nd = 20\nproblem_seed = 1",
        "problem = rank_one\neigs = 4, 1, 0.5",
        "problem = psd_approx\nn = 12\nr = 2\ndensity = 0.2\nproblem_seed = 1",
        "problem = rect_approx\nm = 8\nn = 10\nr = 2\nlambda = 0.01\ndensity = 0.2\nproblem_seed = 1",
        "problem = worst_case_cosine\nd = 7",
        "problem = synchronization\nd = 2\nn = 5\nbeta = 2\nproblem_seed = 3",
    ];
    for text in families {
        let spec = ExperimentSpec::parse(&format!("{text}\n[variant]\nlabel = a\n"))?;
        let instance = spec.problem.build()?;
        let mut rng = DeterministicRng::new(7, 0);
        let point = rng.normal_vector(instance.dim()).scaled(0.3);
        let report = validate_oracle(&instance.oracle, &point, 4, DEFAULT_VALIDATION_STEP)?;
        let worst = report.max_grad_rel_err.max(report.max_hvp_rel_err);
        check(name, worst <= 1e-5, || {
            format!("{}: worst relative derivative error {worst}", spec.problem)
        })?;
    }
    Ok(())
}

fn subproblem_sanity() -> Result<(), HarnessError> {
    let name = "subproblem_sanity";
    // Identity Hessian: the interior solution is exactly -g.
    let g = DenseVector::new(vec![0.3, -0.2, 0.1]).unwrap();
    let model = QuadraticModel::new(g.clone(), Box::new(|v: &DenseVector| Ok(v.clone())))
        .map_err(SolverError::from)?;
    let result = tcg_classic(&model, 10.0, 0.1, 1.0, 30).map_err(SolverError::from)?;
    check(name, result.stop_reason == StopReason::Residual, || {
        format!("identity quadratic stopped {:?}", result.stop_reason)
    })?;
    let err = result.step.add(&g).norm();
    check(name, err <= 1e-10, || {
        format!("identity quadratic step off by {err}")
    })?;

    // Strictly negative curvature from a warm start: one step to the
    // boundary of the full ball.
    let g = DenseVector::zeros(3);
    let model = QuadraticModel::new(g, Box::new(|v: &DenseVector| Ok(v.scaled(-1.0))))
        .map_err(SolverError::from)?;
    let xi = DenseVector::new(vec![0.05, 0.0, 0.0]).unwrap();
    let result = tcg_bg(&model, 1.0, &xi, 0.1, 1.0, 30).map_err(SolverError::from)?;
    check(name, result.stop_reason == StopReason::Boundary, || {
        format!("concave quadratic stopped {:?}", result.stop_reason)
    })?;
    check(name, (result.step.norm() - 1.0).abs() <= 1e-10, || {
        format!("concave quadratic step norm {}", result.step.norm())
    })
}

fn solver_determinism() -> Result<(), HarnessError> {
    let name = "solver_determinism";
    let spec = ExperimentSpec::parse(
        "problem = sine_saddle\nd = 30\nx0 = near_saddle\n\
         [variant]\nlabel = bg\nsigma = 1e-6\nmax_outer = 40\n",
    )?;
    let instance = spec.problem.build()?;
    let x0 = spec.derive_x0(&instance, 5)?;
    let mut config = spec.variants[0].config.clone();
    config.seed = 5;
    let first = tr_run(&instance.oracle, x0.clone(), &config)?;
    let second = tr_run(&spec.problem.build()?.oracle, x0, &config)?;
    check(
        name,
        first.final_point_digest == second.final_point_digest
            && first.records.len() == second.records.len(),
        || {
            format!(
                "same seed diverged: digests {} vs {}",
                first.final_point_digest, second.final_point_digest
            )
        },
    )
}

fn four_variant_descent() -> Result<(), HarnessError> {
    let name = "four_variant_descent";
    let spec = ExperimentSpec::parse(
        "problem = sine_saddle\nd = 30\nx0 = near_saddle\nx0_offset = 1e-3\n\
         [variant]\nlabel = classic\nsolver = tcg_classic\nsigma = 0\nmax_outer = 150\nxi_rule = practical\n\
         [variant]\nlabel = classic_shift\nsolver = tcg_classic\nsigma = 0\nhessian_shift = sqrt_eps_m\nmax_outer = 150\nxi_rule = practical\n\
         [variant]\nlabel = bg_1e-6\nsolver = tcg_bg\nsigma = 1e-6\nmax_outer = 150\nxi_rule = practical\n\
         [variant]\nlabel = bg_1e-3\nsolver = tcg_bg\nsigma = 1e-3\nmax_outer = 150\nxi_rule = practical\n",
    )?;
    let batch = run_experiment(&spec)?;
    check(name, batch.failures.is_empty(), || {
        format!("{} runs failed", batch.failures.len())
    })?;
    for output in &batch.outputs {
        let f0 = output.report.records[0].f_value;
        check(name, output.report.final_f < f0, || {
            format!(
                "variant {} did not descend: f went {f0} -> {}",
                output.variant, output.report.final_f
            )
        })?;
    }
    Ok(())
}

fn adversary_certificate() -> Result<(), HarnessError> {
    let name = "adversary_certificate";
    let mut solver = WrappedTrustRegion::baseline();
    let report = run_adversary_experiment(&mut solver, 3, 7)?;
    check(name, report.min_queried_value >= -1e-12, || {
        format!("queried value dipped to {}", report.min_queried_value)
    })?;
    check(name, (report.revealed_min_value + 2.0).abs() <= 1e-9, || {
        format!("revealed minimum {}", report.revealed_min_value)
    })?;
    check(name, report.escaped(), || {
        format!("randomized escape stalled at f = {}", report.escape_final_f)
    })
}

fn sampler_distribution() -> Result<(), HarnessError> {
    let name = "sampler_distribution";
    let d = 10;
    let dist = AbsDotDistribution::new(d)?;
    let mut rng = DeterministicRng::new(13, 1);
    let q = rng.unit_sphere(d);
    let mut samples: Vec<f64> = (0..2000).map(|_| rng.unit_sphere(d).dot(&q).abs()).collect();
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let ks = ks_distance(&samples, |t| dist.cdf(t));
    check(name, ks <= 0.05, || format!("KS distance {ks}"))
}

fn csv_round_trip() -> Result<(), HarnessError> {
    let name = "csv_round_trip";
    let spec = ExperimentSpec::parse(
        "problem = rank_one\neigs = 4, 1, 0.5\nx0 = near_saddle\nx0_offset = 0.05\n\
         [variant]\nlabel = bg\nsigma = 1e-6\nmax_outer = 25\n",
    )?;
    let batch = run_experiment(&spec)?;
    let output = &batch.outputs[0];
    let dir = std::env::temp_dir().join(format!("rtr-selftest-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| HarnessError::io(dir.display().to_string(), e))?;
    let path = dir.join("selftest.csv");
    csvio::emit_csv(&path, &output.run_id, &output.variant, &output.report.records)?;
    let rows = csvio::read_run_csv(&path)?;
    std::fs::remove_dir_all(&dir).ok();
    check(name, rows.len() == output.report.records.len(), || {
        format!("row count {} vs {}", rows.len(), output.report.records.len())
    })?;
    let last = rows.last().expect("at least one row");
    check(name, last.hvp_cum == output.report.totals.n_hvp, || {
        format!(
            "hvp total {} vs report {}",
            last.hvp_cum, output.report.totals.n_hvp
        )
    })?;
    for (row, record) in rows.iter().zip(&output.report.records) {
        check(
            name,
            row.f.to_bits() == record.f_value.to_bits()
                && row.grad_norm.to_bits() == record.grad_norm.to_bits(),
            || format!("float round-trip mismatch at k = {}", record.k),
        )?;
    }
    Ok(())
}

/// Runs the whole battery, printing one line per item.
pub fn run_selftest() -> Result<(), HarnessError> {
    let items: [(&str, fn() -> Result<(), HarnessError>); 7] = [
        ("oracle_consistency", oracle_consistency),
        ("subproblem_sanity", subproblem_sanity),
        ("solver_determinism", solver_determinism),
        ("four_variant_descent", four_variant_descent),
        ("adversary_certificate", adversary_certificate),
        ("sampler_distribution", sampler_distribution),
        ("csv_round_trip", csv_round_trip),
    ];
    for (label, item) in items {
        item()?;
        println!("[selftest] {label}: ok");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_whole_battery_passes() {
        run_selftest().unwrap();
    }
}
