//! Small row-major matrix kernels for the factorization and
//! synchronization objectives.
//!
//! Every matrix is a flat `&[f64]` in row-major order with explicitly
//! passed dimensions. The products here are the only dense linear algebra
//! the problem suite needs — the factors have few columns (`r <= 2` in the
//! benchmarks) and the synchronization Gram matrices are `n x n` with
//! small `n * d` factors — so hand-rolled triple loops beat pulling in a
//! linear-algebra dependency for what amounts to a handful of `gemm`s.

/// `C = A * B` with `A` of shape `m x k` and `B` of shape `k x n`.
pub(crate) fn mul_nn(a: &[f64], b: &[f64], m: usize, k: usize, n: usize) -> Vec<f64> {
    assert_eq!(a.len(), m * k, "mul_nn: lhs length mismatch");
    assert_eq!(b.len(), k * n, "mul_nn: rhs length mismatch");
    let mut c = vec![0.0; m * n];
    for i in 0..m {
        let a_row = &a[i * k..(i + 1) * k];
        let c_row = &mut c[i * n..(i + 1) * n];
        for (t, &a_it) in a_row.iter().enumerate() {
            if a_it == 0.0 {
                continue;
            }
            let b_row = &b[t * n..(t + 1) * n];
            for (c_ij, &b_tj) in c_row.iter_mut().zip(b_row) {
                *c_ij += a_it * b_tj;
            }
        }
    }
    c
}

/// `C = A * B^T` with `A` of shape `m x k` and `B` of shape `n x k`.
pub(crate) fn mul_nt(a: &[f64], b: &[f64], m: usize, k: usize, n: usize) -> Vec<f64> {
    assert_eq!(a.len(), m * k, "mul_nt: lhs length mismatch");
    assert_eq!(b.len(), n * k, "mul_nt: rhs length mismatch");
    let mut c = vec![0.0; m * n];
    for i in 0..m {
        let a_row = &a[i * k..(i + 1) * k];
        for j in 0..n {
            let b_row = &b[j * k..(j + 1) * k];
            c[i * n + j] = a_row.iter().zip(b_row).map(|(x, y)| x * y).sum();
        }
    }
    c
}

/// `C = A^T * B` with `A` of shape `k x m` and `B` of shape `k x n`.
pub(crate) fn mul_tn(a: &[f64], b: &[f64], m: usize, k: usize, n: usize) -> Vec<f64> {
    assert_eq!(a.len(), k * m, "mul_tn: lhs length mismatch");
    assert_eq!(b.len(), k * n, "mul_tn: rhs length mismatch");
    let mut c = vec![0.0; m * n];
    for t in 0..k {
        let a_row = &a[t * m..(t + 1) * m];
        let b_row = &b[t * n..(t + 1) * n];
        for (i, &a_ti) in a_row.iter().enumerate() {
            if a_ti == 0.0 {
                continue;
            }
            let c_row = &mut c[i * n..(i + 1) * n];
            for (c_ij, &b_tj) in c_row.iter_mut().zip(b_row) {
                *c_ij += a_ti * b_tj;
            }
        }
    }
    c
}

/// Gram matrix `X^T X` (shape `cols x cols`) of a row-major `rows x cols`
/// matrix.
pub(crate) fn gram(x: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    mul_tn(x, x, cols, rows, cols)
}
