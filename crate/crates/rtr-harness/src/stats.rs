//! The sphere-projection distribution and a Kolmogorov–Smirnov
//! statistic, used by `selftest` and the acceptance gate to check the
//! perturbation sampler.
//!
//! For ξ̄ uniform on the unit sphere in `R^d` and any fixed unit vector
//! `q`, the magnitude `t = |⟨q, ξ̄⟩|` has density
//!
//! ```text
//! rho(t) = 2 a_d (1 - t^2)^{(d-3)/2},   t in [0, 1),
//! ```
//!
//! with `a_d` the normalizer (which stays below `sqrt(d / 2 pi)`).
//! Rather than evaluating gamma functions we fix `a_d` numerically from
//! `∫ rho = 1` and build the CDF by composite Simpson quadrature on a
//! dense grid; the grid is fine enough that interpolation error is
//! orders of magnitude below the statistical resolution of any feasible
//! sample.

use crate::error::HarnessError;

/// Number of Simpson panels for the CDF grid (grid has `2 * PANELS + 1`
/// integrand nodes and `PANELS + 1` stored CDF nodes).
const PANELS: usize = 8192;

/// Exact distribution of `|<q, xi_bar>|` for a uniform sphere direction
/// in dimension `d`.
#[derive(Debug, Clone)]
pub struct AbsDotDistribution {
    d: usize,
    a_d: f64,
    /// CDF sampled at `grid[i] = i / PANELS`, with `cdf[0] = 0` and
    /// `cdf[PANELS] = 1`.
    cdf: Vec<f64>,
}

impl AbsDotDistribution {
    /// Builds the distribution for dimension `d >= 3`.
    ///
    /// (`d = 2` has an integrable endpoint singularity the fixed grid
    /// would resolve poorly, and nothing downstream needs it.)
    pub fn new(d: usize) -> Result<Self, HarnessError> {
        if d < 3 {
            return Err(HarnessError::InvalidSpec(format!(
                "projection distribution needs d >= 3, got {d}"
            )));
        }
        let exponent = (d as f64 - 3.0) / 2.0;
        let integrand = |t: f64| (1.0 - t * t).max(0.0).powf(exponent);

        // Composite Simpson over pairs of half-steps; cumulative sums
        // land on the even nodes.
        let h = 1.0 / (2.0 * PANELS as f64);
        let mut cdf = Vec::with_capacity(PANELS + 1);
        cdf.push(0.0);
        let mut acc = 0.0;
        for panel in 0..PANELS {
            let left = 2.0 * panel as f64 * h;
            acc += (h / 3.0)
                * (integrand(left) + 4.0 * integrand(left + h) + integrand(left + 2.0 * h));
            cdf.push(acc);
        }
        let z = acc;
        let a_d = 1.0 / (2.0 * z);
        for value in &mut cdf {
            *value /= z;
        }
        cdf[PANELS] = 1.0;
        Ok(AbsDotDistribution { d, a_d, cdf })
    }

    /// The dimension this distribution was built for.
    pub fn dim(&self) -> usize {
        self.d
    }

    /// The density normalizer `a_d`.
    pub fn normalizer(&self) -> f64 {
        self.a_d
    }

    /// Density at `t` (zero outside `[0, 1)`).
    pub fn density(&self, t: f64) -> f64 {
        if !(0.0..1.0).contains(&t) {
            return 0.0;
        }
        2.0 * self.a_d * (1.0 - t * t).powf((self.d as f64 - 3.0) / 2.0)
    }

    /// CDF at `t`, by linear interpolation on the quadrature grid.
    pub fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return 1.0;
        }
        let pos = t * PANELS as f64;
        let i = (pos.floor() as usize).min(PANELS - 1);
        let frac = pos - i as f64;
        self.cdf[i] + frac * (self.cdf[i + 1] - self.cdf[i])
    }
}

/// Two-sided Kolmogorov–Smirnov distance between a sample and a CDF.
///
/// `samples` must be sorted ascending; `cdf` must be a proper CDF.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = samples.len() as f64;
    let mut worst = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        let below = f - i as f64 / n;
        let above = (i + 1) as f64 / n - f;
        worst = worst.max(below).max(above);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use rtr_core::DeterministicRng;

    #[test]
    fn dimension_three_projections_are_uniform() {
        let dist = AbsDotDistribution::new(3).unwrap();
        assert!((dist.normalizer() - 0.5).abs() < 1e-12);
        assert!((dist.density(0.25) - 1.0).abs() < 1e-12);
        assert!((dist.cdf(0.25) - 0.25).abs() < 1e-9);
        assert!((dist.cdf(0.75) - 0.75).abs() < 1e-9);
    }

    #[test]
    fn the_normalizer_matches_the_gamma_ratio_and_its_bound() {
        // d = 10: Gamma(5) / (Gamma(1/2) Gamma(9/2)) computed by hand.
        let dist = AbsDotDistribution::new(10).unwrap();
        let exact = 24.0 / (std::f64::consts::PI.sqrt() * 11.631728396567448);
        assert!(
            (dist.normalizer() - exact).abs() < 1e-9,
            "a_10 = {}, expected {exact}",
            dist.normalizer()
        );
        for d in [3usize, 4, 10, 51, 200] {
            let dist = AbsDotDistribution::new(d).unwrap();
            let bound = (d as f64 / (2.0 * std::f64::consts::PI)).sqrt();
            assert!(dist.normalizer() <= bound + 1e-12, "d = {d}");
        }
    }

    #[test]
    fn sampled_projections_pass_a_loose_ks_check() {
        let d = 10;
        let dist = AbsDotDistribution::new(d).unwrap();
        let mut rng = DeterministicRng::new(11, 1);
        let q = rng.unit_sphere(d);
        let n = 4000;
        let mut samples: Vec<f64> = (0..n)
            .map(|_| rng.unit_sphere(d).dot(&q).abs())
            .collect();
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let ks = ks_distance(&samples, |t| dist.cdf(t));
        assert!(ks < 0.05, "KS distance {ks} too large for n = {n}");
    }
}
