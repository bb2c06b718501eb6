use proptest::prelude::*;
use rtr_core::{
    axpy, dot, validate_oracle, CoreError, DenseVector, DeterministicRng, ObjectiveOracle,
    ProblemConstants, DEFAULT_VALIDATION_STEP,
};

fn quadratic_oracle(diag: Vec<f64>) -> ObjectiveOracle {
    // f(x) = 1/2 sum_i diag_i x_i^2, an oracle whose three closures are
    // mutually consistent by construction.
    let d = diag.len();
    let dv = diag.clone();
    let dg = diag.clone();
    let dh = diag;
    ObjectiveOracle::new(
        d,
        Box::new(move |x| 0.5 * x.iter().zip(&dv).map(|(xi, di)| di * xi * xi).sum::<f64>()),
        Box::new(move |x| x.iter().zip(&dg).map(|(xi, di)| di * xi).collect()),
        Box::new(move |_, u| u.iter().zip(&dh).map(|(ui, di)| di * ui).collect()),
    )
    .unwrap()
}

#[test]
fn dense_vector_rejects_non_finite_entries() {
    let err = DenseVector::new(vec![1.0, f64::NAN, 3.0]).unwrap_err();
    match err {
        CoreError::NonFinite { index, .. } => assert_eq!(index, 1),
        other => panic!("expected NonFinite, got {other:?}"),
    }
    assert!(DenseVector::new(vec![0.0, f64::INFINITY]).is_err());
    assert!(DenseVector::new(vec![1.0, -2.5]).is_ok());
}

#[test]
fn dot_and_axpy_match_hand_computed_values() {
    let x = DenseVector::new(vec![1.0, 2.0, -3.0]).unwrap();
    let y = DenseVector::new(vec![4.0, -5.0, 6.0]).unwrap();
    assert_eq!(dot(&x, &y).unwrap(), 1.0 * 4.0 + 2.0 * -5.0 + -3.0 * 6.0);
    let z = axpy(2.0, &x, &y).unwrap();
    assert_eq!(z.as_slice(), &[6.0, -1.0, 0.0]);

    let short = DenseVector::new(vec![1.0]).unwrap();
    assert!(matches!(
        dot(&x, &short),
        Err(CoreError::DimensionMismatch { .. })
    ));
    assert!(matches!(
        axpy(1.0, &x, &short),
        Err(CoreError::DimensionMismatch { .. })
    ));
}

#[test]
fn norm_of_three_four_is_five() {
    let v = DenseVector::new(vec![3.0, 4.0]).unwrap();
    assert!((v.norm() - 5.0).abs() < 1e-15);
}

#[test]
fn oracle_counters_increment_exactly_one_per_call() {
    let oracle = quadratic_oracle(vec![1.0, 2.0]);
    let x = DenseVector::new(vec![1.0, 1.0]).unwrap();
    assert_eq!(oracle.counters().n_f, 0);

    oracle.value(&x).unwrap();
    let c = oracle.counters();
    assert_eq!((c.n_f, c.n_grad, c.n_hvp), (1, 0, 0));

    oracle.grad(&x).unwrap();
    let c = oracle.counters();
    assert_eq!((c.n_f, c.n_grad, c.n_hvp), (1, 1, 0));

    oracle.hvp(&x, &x).unwrap();
    let c = oracle.counters();
    assert_eq!((c.n_f, c.n_grad, c.n_hvp), (1, 1, 1));
}

#[test]
fn oracle_dimension_error_does_not_consume_a_call() {
    let oracle = quadratic_oracle(vec![1.0, 2.0]);
    let wrong = DenseVector::new(vec![1.0]).unwrap();
    assert!(matches!(
        oracle.value(&wrong),
        Err(CoreError::DimensionMismatch { .. })
    ));
    assert_eq!(oracle.counters().n_f, 0);
}

#[test]
fn oracle_nan_output_is_a_typed_fault() {
    let oracle = ObjectiveOracle::new(
        2,
        Box::new(|_| f64::NAN),
        Box::new(|_| vec![0.0, f64::INFINITY]),
        Box::new(|_, _| vec![0.0, 0.0]),
    )
    .unwrap();
    let x = DenseVector::zeros(2);
    assert!(matches!(
        oracle.value(&x),
        Err(CoreError::OracleFault { index: None, .. })
    ));
    assert!(matches!(
        oracle.grad(&x),
        Err(CoreError::OracleFault {
            index: Some(1),
            ..
        })
    ));
    // Faulting calls still consumed oracle work.
    let c = oracle.counters();
    assert_eq!((c.n_f, c.n_grad), (1, 1));
}

#[test]
fn validate_oracle_accepts_consistent_quadratic() {
    let oracle = quadratic_oracle(vec![1.0, -2.0, 0.5, 3.0]);
    let x = DenseVector::new(vec![0.3, -1.2, 0.7, 0.1]).unwrap();
    let report = validate_oracle(&oracle, &x, 10, DEFAULT_VALIDATION_STEP).unwrap();
    // Central differences are exact for quadratics up to rounding.
    assert!(report.max_grad_rel_err <= 1e-9, "{report:?}");
    assert!(report.max_hvp_rel_err <= 1e-9, "{report:?}");
}

#[test]
fn validate_oracle_flags_an_inconsistent_gradient() {
    // Gradient deliberately off by 3%.
    let oracle = ObjectiveOracle::new(
        3,
        Box::new(|x| 0.5 * x.iter().map(|xi| xi * xi).sum::<f64>()),
        Box::new(|x| x.iter().map(|xi| 1.03 * xi).collect()),
        Box::new(|_, u| u.to_vec()),
    )
    .unwrap();
    let x = DenseVector::new(vec![1.0, 2.0, 3.0]).unwrap();
    let report = validate_oracle(&oracle, &x, 10, DEFAULT_VALIDATION_STEP).unwrap();
    assert!(report.max_grad_rel_err > 1e-3, "{report:?}");
    // The mismatch also shows up in the gradient-vs-HVP direction.
    assert!(report.max_hvp_rel_err > 1e-3, "{report:?}");
}

#[test]
fn validate_oracle_rejects_bad_arguments() {
    let oracle = quadratic_oracle(vec![1.0]);
    let x = DenseVector::zeros(1);
    assert!(validate_oracle(&oracle, &x, 0, 1e-5).is_err());
    assert!(validate_oracle(&oracle, &x, 3, 0.0).is_err());
    assert!(validate_oracle(&oracle, &x, 3, f64::NAN).is_err());
}

#[test]
fn rng_streams_are_reproducible_and_independent() {
    let mut a = DeterministicRng::new(7, 0);
    let mut b = DeterministicRng::new(7, 0);
    let mut c = DeterministicRng::new(7, 1);
    let xs: Vec<u64> = (0..16).map(|_| a.next_u64()).collect();
    let ys: Vec<u64> = (0..16).map(|_| b.next_u64()).collect();
    let zs: Vec<u64> = (0..16).map(|_| c.next_u64()).collect();
    assert_eq!(xs, ys);
    assert_ne!(xs, zs);
}

#[test]
fn rng_uniform_stays_in_half_open_interval() {
    let mut rng = DeterministicRng::new(123, 0);
    for _ in 0..10_000 {
        let u = rng.uniform();
        assert!(u > 0.0 && u <= 1.0, "uniform out of (0,1]: {u}");
    }
}

#[test]
fn rng_sphere_samples_are_unit_norm() {
    let mut rng = DeterministicRng::new(5, 2);
    for d in [1usize, 2, 10, 1000] {
        let v = rng.unit_sphere(d);
        assert!((v.norm() - 1.0).abs() <= 1e-12, "d={d}: |v|={}", v.norm());
    }
}

#[test]
fn rng_gaussian_moments_are_sane() {
    let mut rng = DeterministicRng::new(99, 0);
    let n = 100_000;
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for _ in 0..n {
        let z = rng.standard_normal();
        sum += z;
        sumsq += z * z;
    }
    let mean = sum / n as f64;
    let var = sumsq / n as f64 - mean * mean;
    assert!(mean.abs() < 0.02, "mean = {mean}");
    assert!((var - 1.0).abs() < 0.03, "var = {var}");
}

#[test]
fn problem_constants_validation() {
    assert!(ProblemConstants::new().validate().is_ok());
    assert!(ProblemConstants::new()
        .with_mu(0.5)
        .with_l_g(2.0)
        .validate()
        .is_ok());
    assert!(ProblemConstants::new()
        .with_mu(3.0)
        .with_l_g(2.0)
        .validate()
        .is_err());
    assert!(ProblemConstants::new().with_l_g(-1.0).validate().is_err());
    assert!(ProblemConstants::new()
        .with_f_low(f64::NEG_INFINITY)
        .validate()
        .is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn axpy_is_linear_in_x(
        data in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 1..40),
        alpha in -10.0f64..10.0,
    ) {
        let (xs, ys): (Vec<f64>, Vec<f64>) = data.into_iter().unzip();
        let x = DenseVector::new(xs).unwrap();
        let y = DenseVector::new(ys).unwrap();
        let z = axpy(alpha, &x, &y).unwrap();
        for i in 0..x.len() {
            prop_assert!((z[i] - (alpha * x[i] + y[i])).abs() <= 1e-12 * (1.0 + z[i].abs()));
        }
    }

    #[test]
    fn dot_is_symmetric_and_norm_compatible(
        data in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 1..40),
    ) {
        let (xs, ys): (Vec<f64>, Vec<f64>) = data.into_iter().unzip();
        let x = DenseVector::new(xs).unwrap();
        let y = DenseVector::new(ys).unwrap();
        let xy = dot(&x, &y).unwrap();
        let yx = dot(&y, &x).unwrap();
        prop_assert_eq!(xy, yx);
        let nx = x.norm();
        let xx = dot(&x, &x).unwrap();
        prop_assert!((nx * nx - xx).abs() <= 1e-9 * (1.0 + xx.abs()));
    }
}
