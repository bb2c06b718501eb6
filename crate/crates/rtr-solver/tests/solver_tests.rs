//! End-to-end behaviour of the trust-region loop on explicit problems
//! whose minimizers, saddles and oracle costs are known in closed form.

use rtr_core::{DenseVector, ObjectiveOracle, ProblemConstants};
use rtr_reference::SymmetricInstance;
use rtr_solver::{
    compute_theory_bounds, mu_for_factorization, point_digest, sample_perturbation, tr_run,
    tr_step, SolverError, SolverKind, StopReason, TerminationReason, TrustRegionConfig,
    TrustRegionState, XiRule,
};

/// Oracle for the exact quadratic `f(x) = <g, x> + 1/2 <H x, x>`.
fn quadratic_oracle(inst: &SymmetricInstance) -> ObjectiveOracle {
    let (v, g, h) = (inst.clone(), inst.clone(), inst.clone());
    ObjectiveOracle::new(
        inst.dim(),
        Box::new(move |x| v.model_value(x)),
        Box::new(move |x| g.model_grad(x)),
        Box::new(move |_, u| h.hvp(u)),
    )
    .expect("valid dimension")
}

/// Oracle for `f(x) = 1/2 sum_i a_i x_i^2 + |x|^4`, a strongly convex
/// quartic with Hessian `diag(a) + 4|x|^2 I + 8 x x^T`.
fn quartic_oracle(a: &[f64]) -> ObjectiveOracle {
    let dim = a.len();
    let (a1, a2, a3) = (a.to_vec(), a.to_vec(), a.to_vec());
    ObjectiveOracle::new(
        dim,
        Box::new(move |x| {
            let sq: f64 = x.iter().map(|v| v * v).sum();
            0.5 * x.iter().zip(&a1).map(|(v, ai)| ai * v * v).sum::<f64>() + sq * sq
        }),
        Box::new(move |x| {
            let sq: f64 = x.iter().map(|v| v * v).sum();
            x.iter()
                .zip(&a2)
                .map(|(v, ai)| ai * v + 4.0 * sq * v)
                .collect()
        }),
        Box::new(move |x, u| {
            let sq: f64 = x.iter().map(|v| v * v).sum();
            let xu: f64 = x.iter().zip(u).map(|(a, b)| a * b).sum();
            x.iter()
                .zip(u)
                .zip(&a3)
                .map(|((xi, ui), ai)| ai * ui + 4.0 * sq * ui + 8.0 * xu * xi)
                .collect()
        }),
    )
    .expect("valid dimension")
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn vec_dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[test]
fn randomized_run_solves_a_convex_quadratic() {
    let eigs: Vec<f64> = (0..10).map(|i| 1.0 + 11.0 * i as f64).collect();
    let eigs: Vec<f64> = eigs.into_iter().rev().collect(); // descending, in [1, 100]
    let inst = SymmetricInstance::from_spectrum(&eigs, 11).with_gaussian_g(5.0, 12);
    let oracle = quadratic_oracle(&inst);
    let solution = inst.newton_point(); // minimizer of the quadratic

    let config = TrustRegionConfig {
        sigma: 1e-6,
        delta0: 1.0,
        delta_bar: 100.0,
        grad_tol: 1e-9,
        max_outer: 40,
        seed: 4,
        keep_xi: true,
        ..TrustRegionConfig::default()
    };
    let report = tr_run(&oracle, DenseVector::zeros(10), &config).expect("run succeeds");

    assert_eq!(report.terminated_by, TerminationReason::GradTol);
    assert!(report.records.len() <= 30, "took {}", report.records.len());
    assert!(report.final_grad_norm <= 1e-9);
    let err: f64 = report
        .final_point
        .iter()
        .zip(&solution)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    assert!(
        err <= 1e-8 * (1.0 + norm(&solution)),
        "distance to the minimizer is {err}"
    );
    assert!(report.records.iter().all(|r| r.accepted));

    // The first residual is -(g + H xi_0) for the logged perturbation.
    let xi0 = &report.xi_log.as_ref().expect("requested")[0];
    let h_xi = inst.hvp(xi0.as_slice());
    let expected: f64 = inst
        .g()
        .iter()
        .zip(&h_xi)
        .map(|(a, b)| (a + b) * (a + b))
        .sum::<f64>()
        .sqrt();
    let got = report.records[0].r0_norm;
    assert!((got - expected).abs() <= 1e-12 * expected.max(1.0));
    assert_eq!(report.records[0].f_value, 0.0); // f(0) = 0 for this family
}

#[test]
fn classic_baseline_stalls_at_an_exact_saddle() {
    let inst = SymmetricInstance::from_spectrum(&[1.0, -1.0], 5);
    let oracle = quadratic_oracle(&inst);
    let config = TrustRegionConfig {
        solver: SolverKind::TcgClassic,
        sigma: 1e-3, // ignored by the classic variant
        grad_tol: 1e-3,
        max_outer: 8,
        ..TrustRegionConfig::default()
    };
    let x0 = DenseVector::zeros(2);
    let report = tr_run(&oracle, x0.clone(), &config).expect("run succeeds");

    // The gradient vanishes at the start point, but the tolerance is
    // only consulted on *accepted* iterates, so the run must exhaust
    // its budget rather than claim convergence at the saddle.
    assert_eq!(report.terminated_by, TerminationReason::MaxOuter);
    assert_eq!(report.records.len(), 8);
    assert_eq!(report.final_point_digest, point_digest(&x0));
    assert_eq!(report.final_f, 0.0);
    assert_eq!(report.totals.n_hvp, 0); // r0 = 0 short-circuits every solve
    assert_eq!(report.totals.n_grad, 1); // only the initial evaluation
    for (k, rec) in report.records.iter().enumerate() {
        assert!(!rec.accepted);
        assert!(rec.rho.is_nan());
        assert_eq!(rec.inner_iters, 0);
        assert_eq!(rec.stop_reason, StopReason::Residual);
        assert_eq!(rec.f_value, 0.0);
        assert_eq!(rec.delta_after, 0.25 * rec.delta_before);
        if k + 1 < report.records.len() {
            assert_eq!(report.records[k + 1].delta_before, rec.delta_after);
        }
    }
}

#[test]
fn randomized_variant_escapes_the_saddle() {
    let inst = SymmetricInstance::from_spectrum(&[1.5, 1.0, 0.5, -0.75], 5);
    let oracle = quadratic_oracle(&inst);
    let config = TrustRegionConfig {
        sigma: 1e-6,
        delta_bar: 10.0,
        max_outer: 12,
        seed: 2,
        ..TrustRegionConfig::default()
    };
    let report = tr_run(&oracle, DenseVector::zeros(4), &config).expect("run succeeds");

    // A boundary stop with negative curvature available forces a model
    // decrease of at least nu^2 delta^2 / (32 L); the exact quadratic
    // realizes it, so one accepted escape drives f below -0.01.
    assert!(
        report.final_f < -0.01,
        "failed to escape, final f = {}",
        report.final_f
    );
    assert!(report.records.iter().any(|r| r.accepted));
    assert!(report
        .records
        .iter()
        .any(|r| r.stop_reason == StopReason::Boundary));
    for rec in &report.records {
        if !rec.accepted {
            assert_eq!(rec.delta_after, 0.25 * rec.delta_before);
        } else if rec.rho > config.rho_double_prime && rec.stop_reason == StopReason::Boundary {
            assert_eq!(
                rec.delta_after,
                (2.0 * rec.delta_before).min(config.delta_bar)
            );
        } else {
            assert_eq!(rec.delta_after, rec.delta_before);
        }
    }
}

#[test]
fn runs_are_bitwise_reproducible() {
    let eigs = [2.0, 1.2, 0.8, 0.4, -0.5, -1.1];
    let config = TrustRegionConfig {
        sigma: 1e-3,
        max_outer: 10,
        seed: 42,
        keep_iterates: true,
        keep_xi: true,
        ..TrustRegionConfig::default()
    };
    let x0 = DenseVector::new(vec![0.3, -0.2, 0.1, 0.0, 0.25, -0.15]).unwrap();

    let run = |seed: u64| {
        let inst = SymmetricInstance::from_spectrum(&eigs, 7).with_gaussian_g(1.0, 3);
        let oracle = quadratic_oracle(&inst);
        let config = TrustRegionConfig { seed, ..config.clone() };
        tr_run(&oracle, x0.clone(), &config).expect("run succeeds")
    };
    let a = run(42);
    let b = run(42);
    let c = run(43);

    assert_eq!(a.records.len(), b.records.len());
    for (ra, rb) in a.records.iter().zip(&b.records) {
        assert!(ra.deterministic_eq(rb), "records diverge at k = {}", ra.k);
    }
    assert_eq!(a.final_point_digest, b.final_point_digest);
    assert_eq!(a.final_f.to_bits(), b.final_f.to_bits());
    assert_eq!(a.totals.n_f, b.totals.n_f);
    assert_eq!(a.totals.n_grad, b.totals.n_grad);
    assert_eq!(a.totals.n_hvp, b.totals.n_hvp);
    let (xa, xb) = (a.xi_log.as_ref().unwrap(), b.xi_log.as_ref().unwrap());
    for (va, vb) in xa.iter().zip(xb.iter()) {
        for (p, q) in va.iter().zip(vb.iter()) {
            assert_eq!(p.to_bits(), q.to_bits());
        }
    }
    assert_ne!(a.final_point_digest, c.final_point_digest);

    // History bookkeeping: one start point plus one entry per step, the
    // iterate frozen bitwise across rejected steps.
    let hist = a.iterates.as_ref().unwrap();
    assert_eq!(hist.len(), a.records.len() + 1);
    for rec in &a.records {
        if !rec.accepted {
            for (p, q) in hist[rec.k].iter().zip(hist[rec.k + 1].iter()) {
                assert_eq!(p.to_bits(), q.to_bits());
            }
        }
    }
    let last = hist.last().unwrap();
    for (p, q) in last.iter().zip(a.final_point.iter()) {
        assert_eq!(p.to_bits(), q.to_bits());
    }

    // Wall-clock stamps exist and never run backwards inside a run.
    let mut prev = 0.0;
    for rec in &a.records {
        assert!(rec.wall_ms.is_finite() && rec.wall_ms >= prev);
        prev = rec.wall_ms;
    }
    assert!(a.wall_time_ms >= prev);
}

#[test]
fn oracle_budget_matches_the_records() {
    let a = [1.0, 2.0, 3.0, 4.0, 5.0];
    let oracle = quartic_oracle(&a);
    let config = TrustRegionConfig {
        sigma: 1e-3,
        delta_bar: 4.0,
        max_outer: 20,
        seed: 9,
        ..TrustRegionConfig::default()
    };
    let x0 = DenseVector::new(vec![0.2, -0.1, 0.15, 0.05, -0.2]).unwrap();
    let report = tr_run(&oracle, x0, &config).expect("run succeeds");

    let mut accepted = 0u64;
    let mut prev_hvp = 0u64;
    for (k, rec) in report.records.iter().enumerate() {
        // One objective evaluation per iteration (plus one at startup).
        assert_eq!(rec.f_cum, k as u64 + 2);
        // One gradient at startup, then one per accepted step.
        if rec.accepted {
            accepted += 1;
        }
        assert_eq!(rec.grad_cum, 1 + accepted);
        // One Hessian product to orient the perturbation, one per inner
        // iteration, one more when the boundary pass runs.
        let boundary = (rec.stop_reason == StopReason::Boundary) as u64;
        assert_eq!(
            rec.hvp_cum - prev_hvp,
            1 + rec.inner_iters as u64 + boundary,
            "iteration {k}"
        );
        assert!(rec.hvp_cum - prev_hvp <= rec.inner_iters as u64 + 2);
        prev_hvp = rec.hvp_cum;
    }
    let last = report.records.last().unwrap();
    assert_eq!(report.totals.n_f, last.f_cum);
    assert_eq!(report.totals.n_grad, last.grad_cum);
    assert_eq!(report.totals.n_hvp, last.hvp_cum);
}

#[test]
fn accepted_steps_satisfy_the_descent_inequality() {
    let a = [1.0, 2.0, 3.0, 4.0, 5.0];
    let oracle = quartic_oracle(&a);
    let config = TrustRegionConfig {
        sigma: 1e-3,
        max_outer: 25,
        seed: 31,
        ..TrustRegionConfig::default()
    };
    let x0 = DenseVector::new(vec![0.2, -0.1, 0.15, 0.05, -0.2]).unwrap();
    let report = tr_run(&oracle, x0, &config).expect("run succeeds");

    // Largest curvature observed along any perturbation bounds the
    // perturbation's possible objective damage.
    let l_est = report
        .records
        .iter()
        .map(|r| r.xi_curvature.abs())
        .filter(|c| c.is_finite())
        .fold(0.0_f64, f64::max);
    assert!(l_est > 0.0);

    let mut checked = 0;
    for (k, rec) in report.records.iter().enumerate() {
        if !rec.accepted {
            continue;
        }
        let f_next = report
            .records
            .get(k + 1)
            .map(|r| r.f_value)
            .unwrap_or(report.final_f);
        let floor = config.rho_prime * rec.model_decrease
            - rec.grad_norm * rec.xi_norm
            - 0.5 * l_est * rec.xi_norm * rec.xi_norm
            - 1e-9;
        assert!(
            rec.f_value - f_next >= floor,
            "iteration {k}: decrease {} below floor {floor}",
            rec.f_value - f_next
        );
        checked += 1;
    }
    assert!(checked >= 5, "only {checked} accepted iterations");
}

#[test]
fn theory_bounds_match_hand_computations() {
    let constants = ProblemConstants::default()
        .with_l_g(1.0)
        .with_l_h(1.0)
        .with_mu(1.0)
        .with_gamma_s(1.0)
        .with_f_low(0.0);
    let config = TrustRegionConfig {
        sigma: 1e-6,
        ..TrustRegionConfig::default()
    };
    let b = compute_theory_bounds(&constants, &config, 100, 1.0, 0.1, 1e-5).expect("valid inputs");

    // With rho' = 0.1 and unit constants: delta_crit = 0.9 / 10; the
    // basin radius is delta_crit / 32 (the binding branch here).
    assert!((b.delta_crit - 0.09).abs() <= 1e-15);
    assert!((b.r_bar - 0.0028125).abs() <= 1e-17);
    assert!((b.g_bar - 0.00140625).abs() <= 1e-17);
    let f_lg = 3.955_078_125e-8; // 0.02 * g_bar^2
    assert!((b.f_lg - f_lg).abs() <= 1e-12 * f_lg);
    let sigma_bar = 2.8125e-5; // 0.02 * g_bar
    assert!((b.sigma_bar - sigma_bar).abs() <= 1e-12 * sigma_bar);
    let delta_prime = f_lg * 0.1 / (1.0 + f_lg);
    assert!((b.delta_prime - delta_prime).abs() <= 1e-12 * delta_prime);
    // Doubly-logarithmic escape budget: only its coarse location is
    // asserted, the value is dominated by the log-log plateau.
    assert!(b.k_esc > 7.6 && b.k_esc < 7.75, "k_esc = {}", b.k_esc);
    assert!(b.k_gn.is_finite() && b.k_gn > 1e7);
    assert!((b.k_m_eps - 3.1915).abs() < 1e-3, "k_m_eps = {}", b.k_m_eps);
    assert!(b.sigma_ok);

    // Deterministic criticality budget at epsilon = 0.1.
    let b2 = compute_theory_bounds(&constants, &config, 100, 1.0, 0.1, 0.1).unwrap();
    let expected = 853_333.333_333_333_3 + 0.5 * (32.0 / 0.09_f64).log2();
    assert!((b2.eps_criticality_bound - expected).abs() <= 1e-6 * expected);

    // Monotonicity in the target and degeneracy to zero above r_bar.
    let loose = compute_theory_bounds(&constants, &config, 100, 1.0, 0.1, 1.0).unwrap();
    let tight = compute_theory_bounds(&constants, &config, 100, 1.0, 0.1, 1e-8).unwrap();
    assert_eq!(loose.k_m_eps, 0.0);
    assert!(tight.k_m_eps >= b.k_m_eps);

    // sigma = 0 is allowed: the escape budget degenerates to infinity.
    let det = TrustRegionConfig {
        sigma: 0.0,
        ..TrustRegionConfig::default()
    };
    let b0 = compute_theory_bounds(&constants, &det, 100, 1.0, 0.1, 1e-5).unwrap();
    assert!(b0.k_esc.is_infinite() && b0.k_gn.is_infinite());
    assert!(!b0.sigma_ok);

    // Too large a perturbation fails the smallness conditions.
    let big = TrustRegionConfig {
        sigma: 1e-4,
        ..TrustRegionConfig::default()
    };
    assert!(!compute_theory_bounds(&constants, &big, 100, 1.0, 0.1, 1e-5)
        .unwrap()
        .sigma_ok);

    // Missing constants are named; bad scalars are rejected.
    let partial = ProblemConstants::default().with_l_g(1.0).with_mu(1.0);
    match compute_theory_bounds(&partial, &config, 100, 1.0, 0.1, 1e-5) {
        Err(SolverError::MissingConstant(name)) => assert_eq!(name, "l_h"),
        other => panic!("expected a missing-constant error, got {other:?}"),
    }
    assert!(compute_theory_bounds(&constants, &config, 100, 1.0, 1.0, 1e-5).is_err());
    assert!(compute_theory_bounds(&constants, &config, 100, 1.0, 0.1, 0.0).is_err());
    assert!(compute_theory_bounds(&constants, &config, 100, -1.0, 0.1, 1e-5).is_err());
    assert!(compute_theory_bounds(&constants, &config, 0, 1.0, 0.1, 1e-5).is_err());
}

#[test]
fn mu_for_factorization_handles_sign_blocks_and_degeneracies() {
    assert_eq!(mu_for_factorization(&[3.0, 2.0, 1.0]).unwrap(), 1.0);
    assert_eq!(mu_for_factorization(&[2.0, 1.0, -1.0]).unwrap(), 1.0);
    assert_eq!(mu_for_factorization(&[5.0, 3.0, 2.5]).unwrap(), 0.5);
    assert_eq!(mu_for_factorization(&[4.0]).unwrap(), 4.0);

    assert!(matches!(
        mu_for_factorization(&[2.0, 2.0, 1.0]),
        Err(SolverError::DegenerateSpectrum(_))
    ));
    assert!(matches!(
        mu_for_factorization(&[1.0, 0.0, -1.0]),
        Err(SolverError::DegenerateSpectrum(_))
    ));
    assert!(matches!(
        mu_for_factorization(&[1.0, 2.0]),
        Err(SolverError::InvalidArgument(_))
    ));
    assert!(matches!(
        mu_for_factorization(&[-1.0, -2.0]),
        Err(SolverError::InvalidArgument(_))
    ));
    assert!(mu_for_factorization(&[]).is_err());
}

#[test]
fn perturbations_have_exact_radius_and_orientation() {
    let inst = SymmetricInstance::from_spectrum(&[6.0, 5.0, 4.0, 3.0, 2.0, 1.0], 8)
        .with_gaussian_g(2.0, 9);
    let oracle = quadratic_oracle(&inst);
    let config = TrustRegionConfig {
        sigma: 1e-3,
        ..TrustRegionConfig::default()
    };
    let mut state = TrustRegionState::init(&oracle, DenseVector::zeros(6), &config).unwrap();
    let g = inst.g();

    let mut positive_first = 0;
    for _ in 0..1000 {
        let xi = sample_perturbation(&mut state, &oracle, &config).unwrap();
        assert!((xi.norm() - 1e-3).abs() <= 1e-15);
        let h_xi = inst.hvp(xi.as_slice());
        assert!(vec_dot(&h_xi, &g) >= 0.0, "orientation violated");
        if xi[0] > 0.0 {
            positive_first += 1;
        }
    }
    // The underlying direction is symmetric; the orientation flip can
    // bias a fixed coordinate, but both half-spaces still occur in bulk.
    assert!((50..=950).contains(&positive_first));
    assert_eq!(oracle.counters().n_hvp, 1000); // exactly one product per draw

    // Small radii bind through delta / 4 under the worst-case rule.
    state.delta = 2e-3;
    let xi = sample_perturbation(&mut state, &oracle, &config).unwrap();
    assert!((xi.norm() - 5e-4).abs() <= 1e-16);

    // The practical rule floors at sqrt(machine epsilon) and caps at
    // delta / 100.
    state.delta = 1.0;
    let practical = TrustRegionConfig {
        xi_rule: XiRule::Practical,
        sigma: 1e-20,
        ..TrustRegionConfig::default()
    };
    let xi = sample_perturbation(&mut state, &oracle, &practical).unwrap();
    let floor = f64::EPSILON.sqrt();
    assert!((xi.norm() - floor).abs() <= 1e-12 * floor);
    let practical_big = TrustRegionConfig {
        xi_rule: XiRule::Practical,
        sigma: 0.5,
        delta0: 10.0, // keeps 4 sigma <= delta0 valid for completeness
        ..TrustRegionConfig::default()
    };
    let xi = sample_perturbation(&mut state, &oracle, &practical_big).unwrap();
    assert!((xi.norm() - 0.01).abs() <= 1e-15);

    // Sampling is undefined for the deterministic setting.
    let det = TrustRegionConfig {
        sigma: 0.0,
        ..TrustRegionConfig::default()
    };
    assert!(matches!(
        sample_perturbation(&mut state, &oracle, &det),
        Err(SolverError::InvalidArgument(_))
    ));
}

#[test]
fn iteration_counts_respect_the_success_accounting() {
    // A deceptive oracle: the model predicts descent, the objective
    // never moves, so every iteration is rejected and the radius
    // collapses geometrically — the accounting holds with equality.
    let oracle = ObjectiveOracle::new(
        3,
        Box::new(|_| 0.0),
        Box::new(|_| vec![1.0, 0.0, 0.0]),
        Box::new(|_, u| u.to_vec()),
    )
    .unwrap();
    let config = TrustRegionConfig {
        sigma: 0.0,
        max_outer: 8,
        ..TrustRegionConfig::default()
    };
    let x0 = DenseVector::zeros(3);
    let report = tr_run(&oracle, x0.clone(), &config).expect("run succeeds");
    assert_eq!(report.final_point_digest, point_digest(&x0));
    for (k, rec) in report.records.iter().enumerate() {
        assert!(!rec.accepted);
        assert_eq!(rec.rho, 0.0); // zero progress against a positive prediction
        assert_eq!(rec.delta_after, 0.25 * rec.delta_before);
        let bound = 0.5 * (config.delta0 / rec.delta_after).log2();
        let k1 = (k + 1) as f64;
        assert!(k1 <= bound + 1e-9);
        assert!(k1 >= bound - 1e-9, "rejected-only runs meet the bound exactly");
    }

    // A mixed accepted/rejected run obeys the same inequality.
    let a = [1.0, 2.0, 3.0, 4.0, 5.0];
    let oracle = quartic_oracle(&a);
    let config = TrustRegionConfig {
        sigma: 1e-3,
        max_outer: 20,
        seed: 9,
        ..TrustRegionConfig::default()
    };
    let x0 = DenseVector::new(vec![0.2, -0.1, 0.15, 0.05, -0.2]).unwrap();
    let report = tr_run(&oracle, x0, &config).expect("run succeeds");
    let mut successes = 0u64;
    for (k, rec) in report.records.iter().enumerate() {
        if rec.accepted {
            successes += 1;
        }
        let bound =
            1.5 * successes as f64 + 0.5 * (config.delta0 / rec.delta_after).log2() + 1e-9;
        assert!((k + 1) as f64 <= bound, "iteration {k} breaks the accounting");
    }
}

#[test]
fn single_steps_chain_like_the_full_run() {
    let inst = SymmetricInstance::from_spectrum(&[4.0, 3.0, 2.0, 1.0], 3).with_gaussian_g(1.0, 6);
    let oracle = quadratic_oracle(&inst);
    let config = TrustRegionConfig {
        sigma: 1e-6,
        seed: 5,
        ..TrustRegionConfig::default()
    };
    let mut state = TrustRegionState::init(&oracle, DenseVector::zeros(4), &config).unwrap();
    let r0 = tr_step(&mut state, &oracle, &config).unwrap();
    let r1 = tr_step(&mut state, &oracle, &config).unwrap();
    assert_eq!(r0.k, 0);
    assert_eq!(r1.k, 1);
    assert_eq!(state.k, 2);
    assert_eq!(r1.delta_before, r0.delta_after);
    assert!(r0.wall_ms.is_nan()); // bare steps carry no clock
}

#[test]
fn contraction_is_quadratic_near_a_nondegenerate_minimizer() {
    // f = sum_i a_i/2 x_i^2 + c/6 x_i^3 with a = (1, 2, 3), c = 1: the
    // origin is a nondegenerate minimizer with mu = 1, and the third
    // derivative is a genuine constant (L_H = 1), so Newton steps
    // contract quadratically rather than faster. On |x_i| <= 0.05 the
    // curvature stays below L = 3.05; with omega2 = 0.05 the basin
    // constant is R = min(mu^2 / (4 L_H L), mu / (8 omega2 L^2)), and
    // the first branch binds: R = 1/12.2.
    let a = [1.0, 2.0, 3.0];
    let c = 1.0;
    let (a1, a2, a3) = (a.to_vec(), a.to_vec(), a.to_vec());
    let oracle = ObjectiveOracle::new(
        3,
        Box::new(move |x| {
            x.iter()
                .zip(&a1)
                .map(|(v, ai)| 0.5 * ai * v * v + c / 6.0 * v * v * v)
                .sum()
        }),
        Box::new(move |x| {
            x.iter()
                .zip(&a2)
                .map(|(v, ai)| ai * v + 0.5 * c * v * v)
                .collect()
        }),
        Box::new(move |x, u| {
            x.iter()
                .zip(u)
                .zip(&a3)
                .map(|((v, ui), ai)| (ai + c * v) * ui)
                .collect()
        }),
    )
    .unwrap();
    let r = 1.0 / 12.2;
    // While |g| > grad_tol the Cauchy decrease keeps the predicted
    // reduction above the ratio guard's floor, so the tolerance below
    // is the smallest this problem can certify before the guard treats
    // further progress as roundoff.
    let config = TrustRegionConfig {
        sigma: 0.0,
        omega2: 0.05,
        grad_tol: 2e-7,
        max_outer: 40,
        keep_iterates: true,
        ..TrustRegionConfig::default()
    };
    let scale = 0.08 / 3.0_f64.sqrt();
    let x0 = DenseVector::new(vec![scale; 3]).unwrap();
    let report = tr_run(&oracle, x0, &config).expect("run succeeds");
    assert_eq!(report.terminated_by, TerminationReason::GradTol);

    let hist = report.iterates.as_ref().unwrap();
    let mut qualifying = 0;
    for rec in &report.records {
        let before = norm(hist[rec.k].as_slice());
        let after = norm(hist[rec.k + 1].as_slice());
        if rec.accepted && rec.stop_reason == StopReason::Residual && before <= r {
            assert!(
                after <= before * before / (2.0 * r) + 1e-9,
                "step {} contracted {before} -> {after}, above the quadratic rate",
                rec.k
            );
            qualifying += 1;
        }
    }
    assert!(qualifying >= 3, "only {qualifying} steps inside the basin");
}

#[test]
fn radius_update_follows_the_three_outcomes() {
    // Interior solve with an excellent ratio: the radius must not move.
    let inst = SymmetricInstance::from_spectrum(&[4.0, 3.0, 2.0, 1.0], 13).with_gaussian_g(0.1, 2);
    let oracle = quadratic_oracle(&inst);
    let config = TrustRegionConfig {
        sigma: 1e-6,
        seed: 3,
        ..TrustRegionConfig::default()
    };
    let mut state = TrustRegionState::init(&oracle, DenseVector::zeros(4), &config).unwrap();
    let rec = tr_step(&mut state, &oracle, &config).unwrap();
    assert!(rec.accepted);
    assert!(rec.rho > config.rho_double_prime);
    assert_eq!(rec.stop_reason, StopReason::Residual);
    assert_eq!(rec.delta_after, rec.delta_before);

    // Pure negative curvature: every step stops on the boundary with a
    // perfect ratio, so the radius doubles until the cap pins it.
    let inst = SymmetricInstance::from_spectrum(&[-1.0], 1);
    let oracle = quadratic_oracle(&inst);
    let config = TrustRegionConfig {
        sigma: 1e-2,
        delta_bar: 3.0,
        max_outer: 4,
        grad_tol: 0.0,
        seed: 1,
        ..TrustRegionConfig::default()
    };
    let report = tr_run(&oracle, DenseVector::zeros(1), &config).expect("run succeeds");
    let deltas: Vec<(f64, f64)> = report
        .records
        .iter()
        .map(|r| (r.delta_before, r.delta_after))
        .collect();
    assert_eq!(deltas[0], (1.0, 2.0));
    assert_eq!(deltas[1], (2.0, 3.0)); // doubling capped by delta_bar
    assert_eq!(deltas[2], (3.0, 3.0));
    for rec in &report.records {
        assert!(rec.accepted);
        assert_eq!(rec.stop_reason, StopReason::Boundary);
        assert!((rec.rho - 1.0).abs() < 1e-9); // the objective is its model
    }
    let fs: Vec<f64> = report.records.iter().map(|r| r.f_value).collect();
    assert!(fs.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn hessian_shift_enters_the_model_consistently() {
    let inst = SymmetricInstance::from_spectrum(&[4.0, 3.0, 2.0, 1.0], 21).with_gaussian_g(1.0, 22);
    let oracle = quadratic_oracle(&inst);
    let shift = 0.5;
    let config = TrustRegionConfig {
        sigma: 1e-3,
        hessian_shift: shift,
        max_outer: 1,
        seed: 17,
        keep_xi: true,
        ..TrustRegionConfig::default()
    };
    let x0 = DenseVector::new(vec![0.1, -0.2, 0.05, 0.15]).unwrap();
    let report = tr_run(&oracle, x0.clone(), &config).expect("run succeeds");
    let rec = &report.records[0];
    let xi = &report.xi_log.as_ref().unwrap()[0];

    let g0 = inst.model_grad(x0.as_slice());
    let h_xi = inst.hvp(xi.as_slice());
    let xi_sq = vec_dot(xi.as_slice(), xi.as_slice());

    // r0 = -(g + (H + shift I) xi): the shift reaches the residual.
    let r0_expected: f64 = g0
        .iter()
        .zip(&h_xi)
        .zip(xi.iter())
        .map(|((g, h), x)| {
            let v = g + h + shift * x;
            v * v
        })
        .sum::<f64>()
        .sqrt();
    assert!((rec.r0_norm - r0_expected).abs() <= 1e-12 * r0_expected);

    // theta prices the perturbation in the *shifted* model...
    let theta_expected =
        vec_dot(&g0, xi.as_slice()) + 0.5 * (vec_dot(&h_xi, xi.as_slice()) + shift * xi_sq);
    assert!((rec.theta - theta_expected).abs() <= 1e-12 * theta_expected.abs().max(1e-30));

    // ...while the recorded curvature diagnostic reads the raw Hessian.
    let rayleigh = vec_dot(&h_xi, xi.as_slice()) / xi_sq;
    assert!((rec.xi_curvature - rayleigh).abs() <= 1e-12 * rayleigh.abs());
}

#[test]
fn bad_inputs_are_rejected() {
    let inst = SymmetricInstance::from_spectrum(&[2.0, 1.0], 1);
    let oracle = quadratic_oracle(&inst);

    let mismatched = DenseVector::zeros(3);
    assert!(matches!(
        tr_run(&oracle, mismatched, &TrustRegionConfig::default()),
        Err(SolverError::InvalidArgument(_))
    ));

    let bad = TrustRegionConfig {
        rho_prime: 0.9,
        rho_double_prime: 0.5,
        ..TrustRegionConfig::default()
    };
    assert!(matches!(
        tr_run(&oracle, DenseVector::zeros(2), &bad),
        Err(SolverError::InvalidConfig(_))
    ));
}
