use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::vector::DenseVector;

/// Counter-based deterministic random stream.
///
/// Thin wrapper over ChaCha8 keyed by `(seed, stream)`: distinct streams of
/// the same seed are independent, so a problem build, an initial-point draw
/// and a solver run can share one user-facing seed without coupling their
/// consumption. All derived quantities (uniforms, Gaussians, sphere points)
/// are produced by fixed arithmetic on the raw 64-bit output, so a sequence
/// is bitwise reproducible for a given build. (The Gaussian transform calls
/// `ln`/`cos` from the platform libm; cross-platform bit identity is not
/// promised.)
#[derive(Debug, Clone)]
pub struct DeterministicRng {
    rng: ChaCha8Rng,
}

impl DeterministicRng {
    /// A generator positioned at the start of `stream` of `seed`.
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    /// Raw 64 bits.
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on the half-open interval `(0, 1]` with 53-bit resolution.
    ///
    /// The left end is excluded so the value is always a valid `ln` argument.
    pub fn uniform(&mut self) -> f64 {
        (((self.rng.next_u64() >> 11) + 1) as f64) * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(lo, hi]` (assumes `lo < hi`).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Standard normal via the Box-Muller transform.
    ///
    /// The second Box-Muller output is discarded: per-draw determinism is
    /// worth more here than halving the uniform consumption.
    pub fn standard_normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Vector of i.i.d. standard normals.
    pub fn normal_vector(&mut self, len: usize) -> DenseVector {
        DenseVector::from_fn(len, |_| self.standard_normal())
            .expect("Box-Muller output is always finite")
    }

    /// Uniform point on the unit sphere of `R^len` (`len >= 1`), as a
    /// normalized Gaussian vector.
    pub fn unit_sphere(&mut self, len: usize) -> DenseVector {
        assert!(len >= 1, "unit_sphere requires len >= 1");
        loop {
            let v = self.normal_vector(len);
            let n = v.norm();
            // The resample guard is unreachable in practice (probability
            // ~2^-53 per draw) but keeps the normalization well-defined.
            if n > 1e-150 {
                return v.scaled(1.0 / n);
            }
        }
    }
}
