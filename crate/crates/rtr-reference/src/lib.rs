//! Dense reference implementations used exclusively by test suites.
//!
//! The production crates are matrix-free by design; verifying them needs an
//! independent dense view of the same quadratic: exact eigendecompositions,
//! exact (pseudo-)solves, operator norms, and a textbook conjugate-gradient
//! loop written against explicit matrices rather than callbacks. Everything
//! here is deliberately naive — clarity over speed — and none of it is ever
//! linked into a production binary (this crate appears only in
//! `dev-dependencies`).

pub use nalgebra;
use nalgebra::{DMatrix, DVector};
use rtr_core::DeterministicRng;

/// A symmetric quadratic `m(v) = <g, v> + 1/2 <v, H v>` held densely,
/// with `H = Q diag(eigs) Q^T` built from a prescribed spectrum and a
/// random orthonormal basis.
#[derive(Debug, Clone)]
pub struct SymmetricInstance {
    h: DMatrix<f64>,
    q: DMatrix<f64>,
    eigs: Vec<f64>,
    g: DVector<f64>,
}

impl SymmetricInstance {
    /// Builds `H` with the given eigenvalues in a random orthonormal basis
    /// drawn from `seed`. The linear term starts at zero.
    pub fn from_spectrum(eigs: &[f64], seed: u64) -> Self {
        let d = eigs.len();
        assert!(d >= 1, "need at least one eigenvalue");
        let q = orthonormal_basis(d, seed);
        let lambda = DMatrix::from_diagonal(&DVector::from_column_slice(eigs));
        let h = &q * lambda * q.transpose();
        // Symmetrize away the last-bit asymmetry of the triple product.
        let h = (&h + h.transpose()) * 0.5;
        Self {
            h,
            q,
            eigs: eigs.to_vec(),
            g: DVector::zeros(d),
        }
    }

    /// Replaces the linear term.
    pub fn set_g(&mut self, g: &[f64]) {
        assert_eq!(g.len(), self.dim());
        self.g = DVector::from_column_slice(g);
    }

    /// Linear term as a builder.
    pub fn with_g(mut self, g: &[f64]) -> Self {
        self.set_g(g);
        self
    }

    /// Gaussian linear term of the given norm.
    pub fn with_gaussian_g(mut self, norm: f64, seed: u64) -> Self {
        let mut rng = DeterministicRng::new(seed, 7);
        let dir = rng.unit_sphere(self.dim());
        let g: Vec<f64> = dir.iter().map(|x| x * norm).collect();
        self.set_g(&g);
        self
    }

    pub fn dim(&self) -> usize {
        self.eigs.len()
    }

    pub fn g(&self) -> Vec<f64> {
        self.g.as_slice().to_vec()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.h
    }

    /// The prescribed eigenvalues (construction order, not sorted).
    pub fn eigs(&self) -> &[f64] {
        &self.eigs
    }

    /// Unit eigenvector for the i-th prescribed eigenvalue.
    pub fn eigvec(&self, i: usize) -> Vec<f64> {
        self.q.column(i).iter().copied().collect()
    }

    /// `H v`.
    pub fn hvp(&self, v: &[f64]) -> Vec<f64> {
        let v = DVector::from_column_slice(v);
        (&self.h * v).as_slice().to_vec()
    }

    /// `m(v) = <g, v> + 1/2 <v, H v>`.
    pub fn model_value(&self, v: &[f64]) -> f64 {
        let v = DVector::from_column_slice(v);
        self.g.dot(&v) + 0.5 * (&self.h * &v).dot(&v)
    }

    /// `grad m(v) = g + H v`.
    pub fn model_grad(&self, v: &[f64]) -> Vec<f64> {
        let v = DVector::from_column_slice(v);
        (&self.g + &self.h * v).as_slice().to_vec()
    }

    /// Operator norm `max_i |eig_i|`.
    pub fn opnorm(&self) -> f64 {
        self.eigs.iter().fold(0.0, |m, e| m.max(e.abs()))
    }

    /// Smallest eigenvalue with its unit eigenvector.
    pub fn min_eig(&self) -> (f64, Vec<f64>) {
        let (i, &e) = self
            .eigs
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty spectrum");
        (e, self.eigvec(i))
    }

    /// Exact solve `H x = b` through the stored eigendecomposition.
    /// Panics if some eigenvalue vanishes.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert!(
            self.eigs.iter().all(|e| *e != 0.0),
            "solve requires an invertible spectrum"
        );
        self.apply_spectral(b, |e| 1.0 / e)
    }

    /// Pseudo-inverse solve: eigencomponents with `|eig| <= tol` are dropped.
    pub fn pseudo_solve(&self, b: &[f64], tol: f64) -> Vec<f64> {
        self.apply_spectral(b, |e| if e.abs() <= tol { 0.0 } else { 1.0 / e })
    }

    /// `-H^+ g`, the (pseudo-)Newton point of the model.
    pub fn newton_point(&self) -> Vec<f64> {
        let minus_g: Vec<f64> = self.g.iter().map(|x| -x).collect();
        self.pseudo_solve(&minus_g, 1e-12)
    }

    fn apply_spectral(&self, b: &[f64], f: impl Fn(f64) -> f64) -> Vec<f64> {
        let b = DVector::from_column_slice(b);
        let coeffs = self.q.transpose() * b;
        let mut scaled = coeffs;
        for (c, &e) in scaled.iter_mut().zip(&self.eigs) {
            *c *= f(e);
        }
        (&self.q * scaled).as_slice().to_vec()
    }
}

/// A random `d x d` orthonormal basis: QR factor of an i.i.d. Gaussian
/// matrix.
pub fn orthonormal_basis(d: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = DeterministicRng::new(seed, 3);
    let a = DMatrix::from_fn(d, d, |_, _| rng.standard_normal());
    a.qr().q()
}

/// Textbook conjugate gradient on `m(v) = <g, v> + 1/2 <v, H v>` started at
/// `start`, returning the iterate sequence `[v^0, v^1, ...]` (the start
/// included). Stops at `max_iters`, on an exactly zero residual, or when a
/// direction of nonpositive curvature shows up (the iterate list then ends
/// at the last well-defined point).
///
/// This is the independent yardstick for CG-equivalence tests: plain dense
/// recurrences, no trust region, no restarts.
pub fn plain_cg(inst: &SymmetricInstance, start: &[f64], max_iters: usize) -> Vec<Vec<f64>> {
    let h = inst.matrix();
    let g = DVector::from_column_slice(&inst.g());
    let mut v = DVector::from_column_slice(start);
    let mut iterates = vec![start.to_vec()];

    // r = -(H v + g)
    let mut r = -(h * &v + &g);
    let mut p = r.clone();
    let mut rr = r.dot(&r);
    if rr == 0.0 {
        return iterates;
    }

    for _ in 0..max_iters {
        let hp = h * &p;
        let php = p.dot(&hp);
        if php <= 0.0 {
            break;
        }
        let alpha = rr / php;
        v += alpha * &p;
        iterates.push(v.as_slice().to_vec());
        r -= alpha * hp;
        let rr_next = r.dot(&r);
        if rr_next == 0.0 {
            break;
        }
        let beta = rr_next / rr;
        p = &r + beta * p;
        rr = rr_next;
    }
    iterates
}
