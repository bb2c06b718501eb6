//! The query transcript and its incrementally maintained span basis.

use crate::error::AdversaryError;
use rtr_core::DenseVector;

/// Residual norm at or below which a vector is considered to lie in the
/// span already and does not enlarge the basis.
///
/// The threshold is absolute: the adversary game is played with
/// unit-scale queries (trust-region iterates and directions of norm
/// `O(1)`), and an absolute cutoff keeps "new direction" decisions
/// independent of the order in which large and small vectors arrive.
pub const SPAN_RESIDUAL_THRESHOLD: f64 = 1e-12;

/// Transcript of a second-order oracle session: every queried
/// (point, direction) pair, the answer each received, and an orthonormal
/// basis of the subspace the queries span.
///
/// The basis is grown by modified Gram–Schmidt with a second
/// re-orthogonalization pass, so each stored vector is orthogonal to the
/// others at working precision. A query contributes at most two basis
/// vectors (its point and its direction), hence after `K` queries the
/// span dimension is at most `2K` — the counting fact the lower-bound
/// construction rests on.
pub struct QueryLog {
    dim: usize,
    queries: Vec<(DenseVector, DenseVector)>,
    answers: Vec<(f64, DenseVector, DenseVector)>,
    basis: Vec<DenseVector>,
}

impl QueryLog {
    /// Creates an empty transcript over ambient dimension `dim >= 1`.
    pub fn new(dim: usize) -> Result<Self, AdversaryError> {
        if dim == 0 {
            return Err(AdversaryError::InvalidArgument(
                "QueryLog dimension must be at least 1".into(),
            ));
        }
        Ok(Self {
            dim,
            queries: Vec::new(),
            answers: Vec::new(),
            basis: Vec::new(),
        })
    }

    /// Ambient dimension of the session.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of queries answered so far.
    pub fn len(&self) -> usize {
        self.queries.len()
    }

    /// Whether no query has been made yet.
    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }

    /// The queried (point, direction) pairs, in order.
    pub fn queries(&self) -> &[(DenseVector, DenseVector)] {
        &self.queries
    }

    /// The answers `(value, gradient, Hessian-vector product)` given to
    /// each query, in the same order as [`queries`](Self::queries).
    pub fn answers(&self) -> &[(f64, DenseVector, DenseVector)] {
        &self.answers
    }

    /// Dimension of the subspace spanned by all queried vectors.
    pub fn span_dim(&self) -> usize {
        self.basis.len()
    }

    /// Orthonormal basis of the query span.
    pub fn span_basis(&self) -> &[DenseVector] {
        &self.basis
    }

    /// Component of `v` orthogonal to the current span (two passes of
    /// modified Gram–Schmidt, so the result is orthogonal to the basis at
    /// working precision even for nearly dependent input).
    pub(crate) fn residual(&self, v: &DenseVector) -> DenseVector {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &self.basis {
                let c = w.dot(b);
                w.axpy_in(-c, b);
            }
        }
        w
    }

    /// Folds `v` into the span basis if it carries a new direction.
    fn absorb(&mut self, v: &DenseVector) {
        let mut w = self.residual(v);
        let norm = w.norm();
        if norm > SPAN_RESIDUAL_THRESHOLD {
            w.scale_in(1.0 / norm);
            self.basis.push(w);
        }
    }

    /// Appends an answered query, updating the span basis with the point
    /// and the direction.
    pub(crate) fn push(
        &mut self,
        x: DenseVector,
        u: DenseVector,
        answer: (f64, DenseVector, DenseVector),
    ) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(u.len(), self.dim);
        self.absorb(&x);
        self.absorb(&u);
        self.queries.push((x, u));
        self.answers.push(answer);
    }
}

/// Answers one second-order query `(x, u)` the way the resisting oracle
/// does — value `|x|^2 / 2`, gradient `x`, Hessian-vector product `u` —
/// and records the exchange in `log`.
///
/// These are exactly the derivatives of `f(x) = |x|^2 / 2`, so any
/// function revealed later must agree with that quadratic on everything
/// the solver saw; the reveal hides its valley in a direction the span
/// never touched. The answer is also returned, so a solver driver can
/// consume it directly.
///
/// # Panics
///
/// If `x` or `u` does not match the log's dimension (a driver bug, not a
/// runtime condition).
pub fn resisting_oracle_answer(
    x: &DenseVector,
    u: &DenseVector,
    log: &mut QueryLog,
) -> (f64, DenseVector, DenseVector) {
    assert_eq!(x.len(), log.dim(), "query point dimension mismatch");
    assert_eq!(u.len(), log.dim(), "query direction dimension mismatch");
    let answer = (0.5 * x.dot(x), x.clone(), u.clone());
    log.push(x.clone(), u.clone(), answer.clone());
    answer
}
