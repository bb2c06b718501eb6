use crate::error::CoreError;

/// A dense `f64` vector whose entries are guaranteed finite.
///
/// The invariant is enforced at construction ([`DenseVector::new`],
/// [`DenseVector::from_fn`]) and at every oracle boundary; the arithmetic
/// kernels re-assert it on their outputs (a non-finite result with finite
/// inputs means an overflow and is treated as a bug, not a recoverable
/// condition).
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector(Vec<f64>);

impl DenseVector {
    /// Wraps `data`, rejecting NaN and infinite entries.
    pub fn new(data: Vec<f64>) -> Result<Self, CoreError> {
        check_finite_slice(&data, "DenseVector::new")?;
        Ok(Self(data))
    }

    /// The all-zeros vector of length `len`.
    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    /// Builds a vector entry by entry, validating finiteness.
    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> f64) -> Result<Self, CoreError> {
        Self::new((0..len).map(|i| f(i)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    /// Consumes the wrapper and returns the raw storage.
    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Euclidean norm.
    ///
    /// The plain sum of squares is used whenever it is comfortably
    /// inside the normal floating-point range. Outside that range —
    /// entries around `1e-160` or `1e160`, which a trust region that
    /// has been quartered a few hundred times in a row actually
    /// produces — the squares are subnormal or infinite and the naive
    /// norm loses most of its mantissa, so the sum is redone scaled by
    /// the largest magnitude.
    pub fn norm(&self) -> f64 {
        let sumsq = self.0.iter().map(|x| x * x).sum::<f64>();
        if (1e-280..1e280).contains(&sumsq) {
            return sumsq.sqrt();
        }
        // Entries so small that even their squared sum underflows (it
        // can be exactly zero for a nonzero vector), or big enough to
        // overflow: rescale by the largest magnitude.
        let amax = self.0.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if amax == 0.0 {
            return 0.0;
        }
        let scaled = self
            .0
            .iter()
            .map(|x| {
                let t = x / amax;
                t * t
            })
            .sum::<f64>();
        let n = amax * scaled.sqrt();
        assert_result_finite(n.is_finite(), "DenseVector::norm");
        n
    }

    /// `true` iff every entry is exactly `0.0`.
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }

    /// In-place `self += alpha * x`. Panics on length mismatch.
    pub fn axpy_in(&mut self, alpha: f64, x: &DenseVector) {
        assert_same_len(self.0.len(), x.0.len(), "axpy_in");
        let mut finite = true;
        for (yi, xi) in self.0.iter_mut().zip(&x.0) {
            *yi += alpha * xi;
            finite &= yi.is_finite();
        }
        assert_result_finite(finite, "axpy_in");
    }

    /// In-place `self = alpha * self`.
    pub fn scale_in(&mut self, alpha: f64) {
        let mut finite = true;
        for yi in self.0.iter_mut() {
            *yi *= alpha;
            finite &= yi.is_finite();
        }
        assert_result_finite(finite, "scale_in");
    }

    /// `self + other`, allocating. Panics on length mismatch.
    pub fn add(&self, other: &DenseVector) -> DenseVector {
        assert_same_len(self.0.len(), other.0.len(), "add");
        let mut out = self.clone();
        out.axpy_in(1.0, other);
        out
    }

    /// `self - other`, allocating. Panics on length mismatch.
    pub fn sub(&self, other: &DenseVector) -> DenseVector {
        assert_same_len(self.0.len(), other.0.len(), "sub");
        let mut out = self.clone();
        out.axpy_in(-1.0, other);
        out
    }

    /// `alpha * self`, allocating.
    pub fn scaled(&self, alpha: f64) -> DenseVector {
        let mut out = self.clone();
        out.scale_in(alpha);
        out
    }

    /// Unchecked dot against another vector of equal length (panics on
    /// mismatch). Prefer the free [`dot`] for fallible call sites.
    pub fn dot(&self, other: &DenseVector) -> f64 {
        assert_same_len(self.0.len(), other.0.len(), "dot");
        let s = self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum::<f64>();
        assert_result_finite(s.is_finite(), "dot");
        s
    }
}

impl std::ops::Index<usize> for DenseVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl AsRef<[f64]> for DenseVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Inner product `<a, b>`, with a typed error on length mismatch.
pub fn dot(a: &DenseVector, b: &DenseVector) -> Result<f64, CoreError> {
    if a.len() != b.len() {
        return Err(CoreError::DimensionMismatch {
            context: "dot",
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(a.dot(b))
}

/// `alpha * x + y`, with a typed error on length mismatch.
pub fn axpy(alpha: f64, x: &DenseVector, y: &DenseVector) -> Result<DenseVector, CoreError> {
    if x.len() != y.len() {
        return Err(CoreError::DimensionMismatch {
            context: "axpy",
            expected: x.len(),
            actual: y.len(),
        });
    }
    let mut out = y.clone();
    out.axpy_in(alpha, x);
    Ok(out)
}

pub(crate) fn check_finite_slice(data: &[f64], context: &'static str) -> Result<(), CoreError> {
    for (index, &value) in data.iter().enumerate() {
        if !value.is_finite() {
            return Err(CoreError::NonFinite {
                context,
                index,
                value,
            });
        }
    }
    Ok(())
}

#[inline]
fn assert_same_len(a: usize, b: usize, what: &str) {
    if a != b {
        panic_len(a, b, what);
    }
}

#[inline]
fn assert_result_finite(finite: bool, what: &str) {
    if !finite {
        panic_nonfinite(what);
    }
}

#[cold]
#[inline(never)]
fn panic_len(a: usize, b: usize, what: &str) -> ! {
    panic!("{what}: length mismatch ({a} vs {b})");
}

#[cold]
#[inline(never)]
fn panic_nonfinite(what: &str) -> ! {
    panic!("{what}: produced a non-finite value from finite inputs (overflow)");
}
