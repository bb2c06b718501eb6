use std::cell::Cell;

use crate::error::{CoreError, OracleCall};
use crate::vector::DenseVector;

/// Objective value closure: `x -> f(x)`.
pub type ValueFn = Box<dyn Fn(&[f64]) -> f64 + Send>;
/// Gradient closure: `x -> grad f(x)`.
pub type GradFn = Box<dyn Fn(&[f64]) -> Vec<f64> + Send>;
/// Hessian-vector-product closure: `(x, u) -> hess f(x) * u`.
pub type HvpFn = Box<dyn Fn(&[f64], &[f64]) -> Vec<f64> + Send>;

/// Snapshot of the oracle call counters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CounterSnapshot {
    /// Objective value evaluations.
    pub n_f: u64,
    /// Gradient evaluations.
    pub n_grad: u64,
    /// Hessian-vector products.
    pub n_hvp: u64,
}

/// A matrix-free objective: value, gradient and Hessian-vector product,
/// each validated and metered.
///
/// Every successful or faulting closure invocation increments exactly one
/// counter by one (a dimension error raised *before* the closure runs does
/// not count — no oracle work happened). Outputs are checked for length and
/// finiteness; a NaN/infinite output surfaces as
/// [`CoreError::OracleFault`] naming the closure and the offending index.
///
/// The closures must be `Send` so whole oracles can move across threads;
/// they need not be `Sync` — concurrent use requires one oracle instance
/// per thread.
pub struct ObjectiveOracle {
    dim: usize,
    value_fn: ValueFn,
    grad_fn: GradFn,
    hvp_fn: HvpFn,
    n_f: Cell<u64>,
    n_grad: Cell<u64>,
    n_hvp: Cell<u64>,
}

impl ObjectiveOracle {
    /// Builds an oracle over an ambient dimension `dim >= 1`.
    pub fn new(
        dim: usize,
        value_fn: ValueFn,
        grad_fn: GradFn,
        hvp_fn: HvpFn,
    ) -> Result<Self, CoreError> {
        if dim == 0 {
            return Err(CoreError::InvalidArgument(
                "ObjectiveOracle dimension must be at least 1".into(),
            ));
        }
        Ok(Self {
            dim,
            value_fn,
            grad_fn,
            hvp_fn,
            n_f: Cell::new(0),
            n_grad: Cell::new(0),
            n_hvp: Cell::new(0),
        })
    }

    /// Ambient dimension `d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Evaluates `f(x)`.
    pub fn value(&self, x: &DenseVector) -> Result<f64, CoreError> {
        self.check_input(x, "oracle value input")?;
        self.n_f.set(self.n_f.get() + 1);
        let v = (self.value_fn)(x.as_slice());
        if !v.is_finite() {
            return Err(CoreError::OracleFault {
                call: OracleCall::Value,
                index: None,
                value: v,
            });
        }
        Ok(v)
    }

    /// Evaluates `grad f(x)`.
    pub fn grad(&self, x: &DenseVector) -> Result<DenseVector, CoreError> {
        self.check_input(x, "oracle grad input")?;
        self.n_grad.set(self.n_grad.get() + 1);
        let g = (self.grad_fn)(x.as_slice());
        self.check_output(g, OracleCall::Grad, "oracle grad output")
    }

    /// Evaluates `hess f(x) * u`.
    pub fn hvp(&self, x: &DenseVector, u: &DenseVector) -> Result<DenseVector, CoreError> {
        self.check_input(x, "oracle hvp point")?;
        self.check_input(u, "oracle hvp direction")?;
        self.n_hvp.set(self.n_hvp.get() + 1);
        let h = (self.hvp_fn)(x.as_slice(), u.as_slice());
        self.check_output(h, OracleCall::Hvp, "oracle hvp output")
    }

    /// Current call counts.
    pub fn counters(&self) -> CounterSnapshot {
        CounterSnapshot {
            n_f: self.n_f.get(),
            n_grad: self.n_grad.get(),
            n_hvp: self.n_hvp.get(),
        }
    }

    fn check_input(&self, x: &DenseVector, context: &'static str) -> Result<(), CoreError> {
        if x.len() != self.dim {
            return Err(CoreError::DimensionMismatch {
                context,
                expected: self.dim,
                actual: x.len(),
            });
        }
        Ok(())
    }

    fn check_output(
        &self,
        out: Vec<f64>,
        call: OracleCall,
        context: &'static str,
    ) -> Result<DenseVector, CoreError> {
        if out.len() != self.dim {
            return Err(CoreError::DimensionMismatch {
                context,
                expected: self.dim,
                actual: out.len(),
            });
        }
        for (index, &value) in out.iter().enumerate() {
            if !value.is_finite() {
                return Err(CoreError::OracleFault {
                    call,
                    index: Some(index),
                    value,
                });
            }
        }
        // Finiteness was just checked; skip the constructor's re-scan.
        Ok(DenseVector::new(out).expect("finiteness already verified"))
    }
}

impl std::fmt::Debug for ObjectiveOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ObjectiveOracle")
            .field("dim", &self.dim)
            .field("counters", &self.counters())
            .finish_non_exhaustive()
    }
}
