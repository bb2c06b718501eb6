use crate::error::CoreError;

/// Optional regularity constants attached to a problem instance.
///
/// Every field is optional: a problem ships whichever constants are actually
/// known (or derivable) for it, and downstream consumers that need a missing
/// one fail with an error naming the field instead of guessing.
///
/// Conventions: `l_g` bounds the Hessian operator norm, `l_h` is a Lipschitz
/// constant of the Hessian, `mu` is the Morse constant (smallest singular
/// value of the Hessian at critical points), and `(gamma_s, r_s)` express the
/// strong-gradient property — `||grad f(x)|| >= gamma_s` whenever `x` is at
/// distance at least `r_s` from every critical point. For problems whose
/// Hessian norm grows without bound, `l_g`/`l_h` are valid on a documented
/// bounded region only.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ProblemConstants {
    /// Global lower bound on the objective.
    pub f_low: Option<f64>,
    /// Bound on the Hessian operator norm (gradient Lipschitz constant).
    pub l_g: Option<f64>,
    /// Lipschitz constant of the Hessian.
    pub l_h: Option<f64>,
    /// Morse constant.
    pub mu: Option<f64>,
    /// Strong-gradient floor.
    pub gamma_s: Option<f64>,
    /// Strong-gradient radius.
    pub r_s: Option<f64>,
}

impl ProblemConstants {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_f_low(mut self, v: f64) -> Self {
        self.f_low = Some(v);
        self
    }

    pub fn with_l_g(mut self, v: f64) -> Self {
        self.l_g = Some(v);
        self
    }

    pub fn with_l_h(mut self, v: f64) -> Self {
        self.l_h = Some(v);
        self
    }

    pub fn with_mu(mut self, v: f64) -> Self {
        self.mu = Some(v);
        self
    }

    pub fn with_gamma_s(mut self, v: f64) -> Self {
        self.gamma_s = Some(v);
        self
    }

    pub fn with_r_s(mut self, v: f64) -> Self {
        self.r_s = Some(v);
        self
    }

    /// Checks internal consistency: positivity of the constants that must be
    /// positive, finiteness everywhere, and `0 < mu <= l_g` when both are
    /// present.
    pub fn validate(&self) -> Result<(), CoreError> {
        let positive = [
            ("l_g", self.l_g),
            ("l_h", self.l_h),
            ("mu", self.mu),
            ("gamma_s", self.gamma_s),
            ("r_s", self.r_s),
        ];
        for (name, v) in positive {
            if let Some(v) = v {
                if !v.is_finite() || v <= 0.0 {
                    return Err(CoreError::InvalidArgument(format!(
                        "problem constant {name} must be finite and positive, got {v}"
                    )));
                }
            }
        }
        if let Some(f_low) = self.f_low {
            if !f_low.is_finite() {
                return Err(CoreError::InvalidArgument(format!(
                    "problem constant f_low must be finite, got {f_low}"
                )));
            }
        }
        if let (Some(mu), Some(l_g)) = (self.mu, self.l_g) {
            if mu > l_g {
                return Err(CoreError::InvalidArgument(format!(
                    "problem constants must satisfy mu <= l_g, got mu = {mu}, l_g = {l_g}"
                )));
            }
        }
        Ok(())
    }
}
