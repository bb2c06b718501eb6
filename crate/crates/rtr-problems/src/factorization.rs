use std::sync::Arc;

use rtr_core::{DenseVector, DeterministicRng, ObjectiveOracle, ProblemConstants};
use rtr_solver::mu_for_factorization;
use rtr_solver::SolverError;

use crate::dense::{gram, mul_nn, mul_tn};
use crate::error::ProblemError;
use crate::instance::{ProblemDescriptor, ProblemInstance};
use crate::sparse::SparseCoo;
use crate::PROBLEM_RNG_STREAM;

/// Margin around the minimizer norm used for the box on which the
/// rank-one constants are valid: constants are computed over
/// `|x| <= 1.25 sqrt(lambda_1)`.
const RANK_ONE_BOX_FACTOR: f64 = 1.25;

fn vec_dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A uniformly random orthonormal basis, as `d` row vectors of a flat
/// row-major `d x d` matrix: Gaussian draws orthonormalized by modified
/// Gram–Schmidt with one re-orthogonalization pass.
fn random_orthonormal(d: usize, rng: &mut DeterministicRng) -> Vec<f64> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(d);
    while rows.len() < d {
        let mut v: Vec<f64> = (0..d).map(|_| rng.standard_normal()).collect();
        for _ in 0..2 {
            for row in &rows {
                let proj = vec_dot(row, &v);
                for (vi, ri) in v.iter_mut().zip(row) {
                    *vi -= proj * ri;
                }
            }
        }
        let norm = vec_dot(&v, &v).sqrt();
        // A Gaussian draw lying in the span of < d previous vectors has
        // probability zero; resampling guards against the measure-zero
        // numerical fluke.
        if norm > 1e-8 {
            for vi in &mut v {
                *vi /= norm;
            }
            rows.push(v);
        }
    }
    rows.concat()
}

/// `M x` for `M = sum_i eigs[i] u_i u_i^T` with `u_i` the rows of `basis`.
fn spectral_apply(basis: &[f64], eigs: &[f64], x: &[f64]) -> Vec<f64> {
    let d = x.len();
    let mut out = vec![0.0; d];
    for (i, &lambda) in eigs.iter().enumerate() {
        let row = &basis[i * d..(i + 1) * d];
        let c = lambda * vec_dot(row, x);
        for (o, &ri) in out.iter_mut().zip(row) {
            *o += c * ri;
        }
    }
    out
}

/// Rank-one symmetric factorization: `f(x) = 1/4 |x x^T - M|_F^2` for a
/// dense symmetric `M` built from the given spectrum in a seeded random
/// orthonormal basis.
///
/// `m_eigs` must be sorted strictly descending with distinct nonzero
/// values and at least one positive entry (otherwise no rank-one fit
/// exists and the Morse constant is undefined). Writing `lambda_1` for the
/// leading eigenvalue and `u_1` for its basis vector:
///
/// * gradient `(x x^T - M) x = |x|^2 x - M x`;
/// * Hessian product `|x|^2 u + 2 <x, u> x - M u` (the Hessian is
///   `|x|^2 I + 2 x x^T - M`, applied without materializing `M` — products
///   go through the stored spectral decomposition);
/// * critical points are the origin and `+-sqrt(lambda_i) u_i` over
///   positive `lambda_i`; the global minimum
///   `1/4 (sum_i lambda_i^2 - lambda_1^2)` sits at `+-sqrt(lambda_1) u_1`
///   and the origin is the canonical strict saddle;
/// * `mu` comes from the eigenvalue-gap formula
///   ([`mu_for_factorization`]).
///
/// The quartic has no global `L_G`/`L_H`; the shipped values hold on the
/// box `|x| <= rho` with `rho = 1.25 sqrt(lambda_1)`, which contains every
/// minimizer with margin: there `|grad^2 f| <= 3 rho^2 + max_i |lambda_i|`
/// and the Hessian is `6 rho`-Lipschitz (`|grad^2 f(x) - grad^2 f(y)| <=
/// 3 (|x| + |y|) |x - y|`). Runs that stay in the box — every local
/// convergence experiment here does — may use them as honest bounds.
pub fn make_rank_one_factorization(
    m_eigs: &[f64],
    seed: u64,
) -> Result<ProblemInstance, ProblemError> {
    let mu = mu_for_factorization(m_eigs).map_err(|err| match err {
        SolverError::DegenerateSpectrum(msg) => ProblemError::DegenerateSpectrum(msg),
        other => ProblemError::InvalidParameter(other.to_string()),
    })?;

    let d = m_eigs.len();
    let lambda_1 = m_eigs[0];
    let m_fro_sq: f64 = m_eigs.iter().map(|l| l * l).sum();
    let op_norm = m_eigs.iter().fold(0.0_f64, |m, l| m.max(l.abs()));

    let mut rng = DeterministicRng::new(seed, PROBLEM_RNG_STREAM);
    let basis = Arc::new(random_orthonormal(d, &mut rng));
    let eigs = Arc::new(m_eigs.to_vec());

    let basis_v = Arc::clone(&basis);
    let eigs_v = Arc::clone(&eigs);
    let value = Box::new(move |x: &[f64]| {
        let x_sq = vec_dot(x, x);
        let quad: f64 = eigs_v
            .iter()
            .enumerate()
            .map(|(i, &lambda)| {
                let c = vec_dot(&basis_v[i * d..(i + 1) * d], x);
                lambda * c * c
            })
            .sum();
        0.25 * (x_sq * x_sq - 2.0 * quad + m_fro_sq)
    });

    let basis_g = Arc::clone(&basis);
    let eigs_g = Arc::clone(&eigs);
    let grad = Box::new(move |x: &[f64]| {
        let x_sq = vec_dot(x, x);
        let mx = spectral_apply(&basis_g, &eigs_g, x);
        x.iter().zip(&mx).map(|(xi, mi)| x_sq * xi - mi).collect()
    });

    let basis_h = Arc::clone(&basis);
    let eigs_h = Arc::clone(&eigs);
    let hvp = Box::new(move |x: &[f64], u: &[f64]| {
        let x_sq = vec_dot(x, x);
        let xu = vec_dot(x, u);
        let mu_vec = spectral_apply(&basis_h, &eigs_h, u);
        (0..x.len())
            .map(|i| x_sq * u[i] + 2.0 * xu * x[i] - mu_vec[i])
            .collect()
    });

    let oracle = ObjectiveOracle::new(d, value, grad, hvp)?;

    let rho_box = RANK_ONE_BOX_FACTOR * lambda_1.sqrt();
    let constants = ProblemConstants::new()
        .with_f_low(0.25 * (m_fro_sq - lambda_1 * lambda_1))
        .with_l_g(3.0 * rho_box * rho_box + op_norm)
        .with_l_h(6.0 * rho_box)
        .with_mu(mu);

    let scale = lambda_1.sqrt();
    let minimizer = DenseVector::from_fn(d, |i| scale * basis[i])?;

    Ok(ProblemInstance {
        oracle,
        constants,
        known_minimum_value: Some(0.25 * (m_fro_sq - lambda_1 * lambda_1)),
        known_saddle: Some(DenseVector::zeros(d)),
        known_minimizer: Some(minimizer),
        descriptor: ProblemDescriptor::new(
            "rank_one_factorization",
            vec![("spectrum", format!("{m_eigs:?}"))],
            Some(seed),
        ),
    })
}

/// Shared construction for the positive-semidefinite approximation
/// objective over an explicit target matrix.
fn psd_instance_from_matrix(
    a: SparseCoo,
    n: usize,
    r: usize,
    descriptor: ProblemDescriptor,
) -> Result<ProblemInstance, ProblemError> {
    let a = Arc::new(a);
    let a_fro_sq = a.fro_norm_sq();
    let has_entries = a.nnz() > 0;

    let a_v = Arc::clone(&a);
    let value = Box::new(move |x: &[f64]| {
        let g = gram(x, n, r);
        let g_sq = vec_dot(&g, &g);
        0.25 * (g_sq - 2.0 * a_v.weighted_inner(x, x, r) + a_fro_sq)
    });

    let a_g = Arc::clone(&a);
    let grad = Box::new(move |x: &[f64]| {
        let g = gram(x, n, r);
        let mut out = mul_nn(x, &g, n, r, r);
        let ax = a_g.mul_mat(x, r);
        for (o, &v) in out.iter_mut().zip(&ax) {
            *o -= v;
        }
        out
    });

    let a_h = Arc::clone(&a);
    let hvp = Box::new(move |x: &[f64], u: &[f64]| {
        let g = gram(x, n, r);
        // S = U^T X + X^T U, the symmetrized cross Gram matrix.
        let c = mul_tn(u, x, r, n, r);
        let mut s = vec![0.0; r * r];
        for p in 0..r {
            for q in 0..r {
                s[p * r + q] = c[p * r + q] + c[q * r + p];
            }
        }
        let mut out = mul_nn(u, &g, n, r, r);
        let xs = mul_nn(x, &s, n, r, r);
        let au = a_h.mul_mat(u, r);
        for i in 0..out.len() {
            out[i] += xs[i] - au[i];
        }
        out
    });

    let oracle = ObjectiveOracle::new(n * r, value, grad, hvp)?;

    Ok(ProblemInstance {
        oracle,
        constants: ProblemConstants::new().with_f_low(0.0),
        known_minimum_value: None,
        known_saddle: has_entries.then(|| DenseVector::zeros(n * r)),
        known_minimizer: None,
        descriptor,
    })
}

/// Rank-`r` positive-semidefinite approximation of a random symmetric
/// sparse target:
///
/// ```text
/// f(X) = 1/4 |X X^T - A|_F^2,    X in R^{n x r} (row-major flattened)
/// ```
///
/// `A` is symmetric with each unordered index pair independently nonzero
/// with probability `density`, values uniform on `[0, 1)`. The gradient is
/// `(X X^T - A) X` and the Hessian product along `U` is
/// `U (X^T X) + X (U^T X) + X (X^T U) - A U`; both stream through the
/// sparsity pattern plus `r x r` Gram matrices, never forming `X X^T`.
///
/// The origin is a strict saddle whenever `A` has any entries (gradient
/// zero, Hessian `-A (x) I_r` with a negative direction from the Perron
/// eigenvalue of `A`). For `r = 1` against the same target matrix the
/// objective coincides with [`make_rank_one_factorization`]; for `r >= 2`
/// the invariance `f(X Q) = f(X)` over orthogonal `Q` makes every critical
/// point non-isolated, deliberately breaking the Morse property — hence no
/// `mu` is shipped. The only global constant is the lower bound `0`.
pub fn make_psd_matrix_approx(
    n: usize,
    r: usize,
    density: f64,
    seed: u64,
) -> Result<ProblemInstance, ProblemError> {
    if n < 1 || r < 1 {
        return Err(ProblemError::InvalidParameter(format!(
            "psd approximation needs n >= 1 and r >= 1, got n = {n}, r = {r}"
        )));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(ProblemError::InvalidParameter(format!(
            "density must lie in (0, 1], got {density}"
        )));
    }

    let mut rng = DeterministicRng::new(seed, PROBLEM_RNG_STREAM);
    let a = SparseCoo::sample_symmetric(n, density, &mut rng);
    let descriptor = ProblemDescriptor::new(
        "psd_matrix_approx",
        vec![
            ("n", n.to_string()),
            ("r", r.to_string()),
            ("density", density.to_string()),
        ],
        Some(seed),
    );
    psd_instance_from_matrix(a, n, r, descriptor)
}

/// Rank-`r` approximation of a random rectangular sparse target with
/// ridge ("nuclear-norm") regularization:
///
/// ```text
/// f(L, R) = 1/2 |L R^T - A|_F^2 + lambda/2 (|L|_F^2 + |R|_F^2)
/// ```
///
/// over the concatenated variable `(vec L, vec R)` of length `(m + n) r`,
/// both factors row-major. `A` is `m x n` with each cell independently
/// nonzero with probability `density`, values uniform on `[0, 1)`.
///
/// Gradient blocks: `L (R^T R) - A R + lambda L` and
/// `R (L^T L) - A^T L + lambda R`. Hessian products symmetrize the cross
/// Gram matrices: along `(U_L, U_R)` the blocks are
/// `U_L (R^T R) + L (U_R^T R + R^T U_R) - A U_R + lambda U_L` and the
/// mirror image. The residual `L R^T - A` is never materialized: every
/// product streams through the sparsity pattern plus `r x r` Grams.
///
/// The origin is a critical point, and a strict saddle whenever the top
/// singular value of `A` exceeds `lambda` (true at the shipped scales,
/// where `sigma_1(A)` is order 1 and `lambda <= 0.01`). With `lambda = 0`
/// the scaling invariance `(L, R) -> (alpha L, R / alpha)` makes critical
/// manifolds, and `r >= 2` adds the orthogonal invariance — both Morse
/// violations are intentional benchmark regimes, so no `mu` is shipped.
pub fn make_rect_matrix_approx(
    m: usize,
    n: usize,
    r: usize,
    lambda: f64,
    density: f64,
    seed: u64,
) -> Result<ProblemInstance, ProblemError> {
    if m < 1 || n < 1 || r < 1 {
        return Err(ProblemError::InvalidParameter(format!(
            "rectangular approximation needs m, n, r >= 1, got m = {m}, n = {n}, r = {r}"
        )));
    }
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(ProblemError::InvalidParameter(format!(
            "lambda must be finite and nonnegative, got {lambda}"
        )));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(ProblemError::InvalidParameter(format!(
            "density must lie in (0, 1], got {density}"
        )));
    }

    let mut rng = DeterministicRng::new(seed, PROBLEM_RNG_STREAM);
    let a = Arc::new(SparseCoo::sample(m, n, density, &mut rng));
    let a_fro_sq = a.fro_norm_sq();
    let has_entries = a.nnz() > 0;
    let split = m * r;
    let dim = (m + n) * r;

    let a_v = Arc::clone(&a);
    let value = Box::new(move |x: &[f64]| {
        let (l, rm) = x.split_at(split);
        let gl = gram(l, m, r);
        let gr = gram(rm, n, r);
        let cross = vec_dot(&gl, &gr); // <L^T L, R^T R> = |L R^T|_F^2
        let residual_sq = cross - 2.0 * a_v.weighted_inner(l, rm, r) + a_fro_sq;
        0.5 * residual_sq + 0.5 * lambda * vec_dot(x, x)
    });

    let a_g = Arc::clone(&a);
    let grad = Box::new(move |x: &[f64]| {
        let (l, rm) = x.split_at(split);
        let gl = gram(l, m, r);
        let gr = gram(rm, n, r);

        let mut out = Vec::with_capacity(x.len());
        let lgr = mul_nn(l, &gr, m, r, r);
        let ar = a_g.mul_mat(rm, r);
        out.extend(
            (0..split).map(|i| lgr[i] - ar[i] + lambda * l[i]),
        );
        let rgl = mul_nn(rm, &gl, n, r, r);
        let atl = a_g.tr_mul_mat(l, r);
        out.extend(
            (0..n * r).map(|i| rgl[i] - atl[i] + lambda * rm[i]),
        );
        out
    });

    let a_h = Arc::clone(&a);
    let hvp = Box::new(move |x: &[f64], u: &[f64]| {
        let (l, rm) = x.split_at(split);
        let (ul, ur) = u.split_at(split);
        let gl = gram(l, m, r);
        let gr = gram(rm, n, r);

        // Symmetrized cross Grams: S1 = U_L^T L + L^T U_L, S2 likewise for R.
        let c1 = mul_tn(ul, l, r, m, r);
        let c2 = mul_tn(ur, rm, r, n, r);
        let mut s1 = vec![0.0; r * r];
        let mut s2 = vec![0.0; r * r];
        for p in 0..r {
            for q in 0..r {
                s1[p * r + q] = c1[p * r + q] + c1[q * r + p];
                s2[p * r + q] = c2[p * r + q] + c2[q * r + p];
            }
        }

        let mut out = Vec::with_capacity(u.len());
        let ul_gr = mul_nn(ul, &gr, m, r, r);
        let l_s2 = mul_nn(l, &s2, m, r, r);
        let a_ur = a_h.mul_mat(ur, r);
        out.extend(
            (0..split).map(|i| ul_gr[i] + l_s2[i] - a_ur[i] + lambda * ul[i]),
        );
        let ur_gl = mul_nn(ur, &gl, n, r, r);
        let r_s1 = mul_nn(rm, &s1, n, r, r);
        let at_ul = a_h.tr_mul_mat(ul, r);
        out.extend(
            (0..n * r).map(|i| ur_gl[i] + r_s1[i] - at_ul[i] + lambda * ur[i]),
        );
        out
    });

    let oracle = ObjectiveOracle::new(dim, value, grad, hvp)?;

    Ok(ProblemInstance {
        oracle,
        constants: ProblemConstants::new().with_f_low(0.0),
        known_minimum_value: None,
        known_saddle: has_entries.then(|| DenseVector::zeros(dim)),
        known_minimizer: None,
        descriptor: ProblemDescriptor::new(
            "rect_matrix_approx",
            vec![
                ("m", m.to_string()),
                ("n", n.to_string()),
                ("r", r.to_string()),
                ("lambda", lambda.to_string()),
                ("density", density.to_string()),
            ],
            Some(seed),
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// With `r = 1` and the same symmetric target matrix, the PSD
    /// approximation is the rank-one factorization objective: identical
    /// values at random points.
    #[test]
    fn psd_at_rank_one_matches_the_factorization_objective() {
        let eigs = [4.0, 1.0, 0.5];
        let seed = 42;
        let rank_one = make_rank_one_factorization(&eigs, seed).unwrap();

        // Rebuild the same dense target the factorization instance uses:
        // the basis draw is the constructor's first (and only) use of its
        // generation stream.
        let d = eigs.len();
        let mut rng = DeterministicRng::new(seed, PROBLEM_RNG_STREAM);
        let basis = random_orthonormal(d, &mut rng);
        let mut m_dense = vec![0.0; d * d];
        for (t, &lambda) in eigs.iter().enumerate() {
            let row = &basis[t * d..(t + 1) * d];
            for i in 0..d {
                for j in 0..d {
                    m_dense[i * d + j] += lambda * row[i] * row[j];
                }
            }
        }
        let a = SparseCoo::from_dense(&m_dense, d, d);
        let psd = psd_instance_from_matrix(
            a,
            d,
            1,
            ProblemDescriptor::new("psd_matrix_approx", vec![], Some(seed)),
        )
        .unwrap();

        let mut probe_rng = DeterministicRng::new(7, 0);
        for _ in 0..20 {
            let x = probe_rng.normal_vector(d);
            let f_rank_one = rank_one.oracle.value(&x).unwrap();
            let f_psd = psd.oracle.value(&x).unwrap();
            let rel = (f_rank_one - f_psd).abs() / f_rank_one.abs().max(1.0);
            assert!(
                rel <= 1e-12,
                "psd/r=1 value {f_psd} deviates from rank-one value {f_rank_one}"
            );

            // Gradients and Hessian products agree too (same objective).
            let g1 = rank_one.oracle.grad(&x).unwrap();
            let g2 = psd.oracle.grad(&x).unwrap();
            let diff = g1.sub(&g2).norm();
            assert!(diff <= 1e-12 * g1.norm().max(1.0));

            let u = probe_rng.unit_sphere(d);
            let h1 = rank_one.oracle.hvp(&x, &u).unwrap();
            let h2 = psd.oracle.hvp(&x, &u).unwrap();
            let diff = h1.sub(&h2).norm();
            assert!(diff <= 1e-12 * h1.norm().max(1.0));
        }
    }

    #[test]
    fn orthonormal_bases_are_orthonormal() {
        let mut rng = DeterministicRng::new(3, PROBLEM_RNG_STREAM);
        let d = 12;
        let basis = random_orthonormal(d, &mut rng);
        for i in 0..d {
            for j in i..d {
                let dot = vec_dot(&basis[i * d..(i + 1) * d], &basis[j * d..(j + 1) * d]);
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (dot - expect).abs() <= 1e-12,
                    "basis rows {i},{j} have inner product {dot}"
                );
            }
        }
    }
}
