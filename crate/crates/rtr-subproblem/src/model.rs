//! Matrix-free quadratic model `m(v) = <g, v> + 1/2 <v, H v>`.
//!
//! The Hessian is only ever touched through a product callback, so a
//! model over `R^d` costs `O(d)` memory regardless of the structure of
//! `H`. The callback is whatever the caller wants it to be: an oracle
//! Hessian-vector product frozen at the current iterate, a dense
//! matrix in tests, or a shifted operator `H + lambda I`.

use crate::error::SubproblemError;
use rtr_core::{dot, CoreError, DenseVector, ObjectiveOracle};

/// Product callback: `v -> H v` for a fixed symmetric operator `H`.
pub type HvpCallback<'a> = Box<dyn Fn(&DenseVector) -> Result<DenseVector, CoreError> + 'a>;

/// Quadratic model `m(v) = <g, v> + 1/2 <v, H v>` with a matrix-free Hessian.
pub struct QuadraticModel<'a> {
    g: DenseVector,
    hvp: HvpCallback<'a>,
    dim: usize,
}

impl std::fmt::Debug for QuadraticModel<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QuadraticModel")
            .field("dim", &self.dim)
            .field("g_norm", &self.g.norm())
            .finish_non_exhaustive()
    }
}

impl<'a> QuadraticModel<'a> {
    /// Builds a model from a gradient vector and a Hessian-product callback.
    ///
    /// The callback must represent a symmetric operator; the solvers do
    /// not check symmetry (that is the oracle validator's job) but every
    /// convergence guarantee assumes it.
    pub fn new(g: DenseVector, hvp: HvpCallback<'a>) -> Result<Self, SubproblemError> {
        if g.is_empty() {
            return Err(SubproblemError::InvalidArgument(
                "model gradient must have dimension >= 1".into(),
            ));
        }
        let dim = g.len();
        Ok(Self { g, hvp, dim })
    }

    /// Freezes an objective oracle at the point `x`, giving the model
    /// `m(v) = <grad f(x), v> + 1/2 <v, (H + shift I) v>` with
    /// `H = hess f(x)`.
    ///
    /// The caller supplies the gradient it already holds so that
    /// building the model performs no oracle calls by itself; every
    /// subsequent [`QuadraticModel::apply_h`] costs exactly one
    /// Hessian-product evaluation. `shift` adds a diagonal offset
    /// (`shift >= 0` turns the model into the shifted variant used by
    /// the regularized solver configurations; pass `0.0` for the plain
    /// model).
    pub fn at_point(
        oracle: &'a ObjectiveOracle,
        x: DenseVector,
        g: DenseVector,
        shift: f64,
    ) -> Result<Self, SubproblemError> {
        if x.len() != oracle.dim() || g.len() != oracle.dim() {
            return Err(SubproblemError::InvalidArgument(format!(
                "point/gradient dimension {}/{} does not match oracle dimension {}",
                x.len(),
                g.len(),
                oracle.dim()
            )));
        }
        if !(shift.is_finite() && shift >= 0.0) {
            return Err(SubproblemError::InvalidArgument(format!(
                "hessian shift must be finite and >= 0, got {shift}"
            )));
        }
        let hvp: HvpCallback<'a> = if shift == 0.0 {
            Box::new(move |u: &DenseVector| oracle.hvp(&x, u))
        } else {
            Box::new(move |u: &DenseVector| {
                let hu = oracle.hvp(&x, u)?;
                rtr_core::axpy(shift, u, &hu)
            })
        };
        Self::new(g, hvp)
    }

    /// Dimension of the model space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The linear term `g`.
    pub fn g(&self) -> &DenseVector {
        &self.g
    }

    /// Applies the Hessian: returns `H v`. Costs one product evaluation.
    pub fn apply_h(&self, v: &DenseVector) -> Result<DenseVector, SubproblemError> {
        if v.len() != self.dim {
            return Err(SubproblemError::InvalidArgument(format!(
                "hessian product input has dimension {}, model has {}",
                v.len(),
                self.dim
            )));
        }
        Ok((self.hvp)(v)?)
    }

    /// Model value `m(v) = <g, v> + 1/2 <v, H v>`. Costs one product
    /// evaluation; intended for tests and diagnostics, not hot loops.
    pub fn value(&self, v: &DenseVector) -> Result<f64, SubproblemError> {
        let hv = self.apply_h(v)?;
        Ok(dot(&self.g, v)? + 0.5 * dot(v, &hv)?)
    }

    /// Model gradient `g + H v`. Costs one product evaluation.
    pub fn grad(&self, v: &DenseVector) -> Result<DenseVector, SubproblemError> {
        let hv = self.apply_h(v)?;
        Ok(rtr_core::axpy(1.0, &self.g, &hv)?)
    }
}
