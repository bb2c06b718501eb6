use rtr_core::{DenseVector, ObjectiveOracle, ProblemConstants};
use std::fmt;

/// Identity of a generated instance: the family name, the generation
/// parameters, and the seed (absent for the one parameter-free,
/// deterministic construction).
///
/// Rebuilding with an equal descriptor reproduces the instance exactly —
/// generation draws from a dedicated random stream addressed by the seed —
/// so a descriptor is all an experiment log needs to make a run
/// replayable.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemDescriptor {
    /// Family name, e.g. `"sine_saddle"`.
    pub name: &'static str,
    /// Generation parameters as `(key, rendered value)` pairs, in
    /// constructor-argument order.
    pub params: Vec<(&'static str, String)>,
    /// Generation seed, when the family is randomized.
    pub seed: Option<u64>,
}

impl ProblemDescriptor {
    pub(crate) fn new(
        name: &'static str,
        params: Vec<(&'static str, String)>,
        seed: Option<u64>,
    ) -> Self {
        Self { name, params, seed }
    }
}

impl fmt::Display for ProblemDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        let mut first = true;
        for (key, value) in &self.params {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{key} = {value}")?;
            first = false;
        }
        if let Some(seed) = self.seed {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "seed = {seed}")?;
        }
        write!(f, ")")
    }
}

/// A benchmark objective bundled with everything the solvers and the
/// diagnostics need to reason about it.
///
/// The oracle is the only computational interface; the rest is metadata:
///
/// * [`constants`](Self::constants) carries whichever regularity constants
///   (`L_G`, `L_H`, `mu`, the strong-gradient pair, `f_low`) are actually
///   known for the family — consumers needing a missing one fail with a
///   named error rather than guess;
/// * [`known_minimum_value`](Self::known_minimum_value) lower-bounds every
///   legitimate run outcome when the global minimum is known in closed
///   form;
/// * [`known_saddle`](Self::known_saddle) is a critical point with a
///   strictly negative curvature direction — the launch pad for the
///   escape experiments;
/// * [`known_minimizer`](Self::known_minimizer) is an exact global
///   minimizer when one is available analytically, used by the local
///   convergence checks.
///
/// Instances are immutable after construction (the oracle's call counters
/// are the only moving part) and `Send`, so a fresh instance can be built
/// per worker thread from the same descriptor.
pub struct ProblemInstance {
    /// Value / gradient / Hessian-vector-product access to the objective.
    pub oracle: ObjectiveOracle,
    /// Regularity constants known for this family (fields left `None` when
    /// no global value exists).
    pub constants: ProblemConstants,
    /// Exact global minimum value, when known.
    pub known_minimum_value: Option<f64>,
    /// A critical point with a negative curvature direction, when known.
    pub known_saddle: Option<DenseVector>,
    /// An exact global minimizer, when known.
    pub known_minimizer: Option<DenseVector>,
    /// Replayable identity of this instance.
    pub descriptor: ProblemDescriptor,
}

impl ProblemInstance {
    /// Ambient dimension of the decision variable.
    pub fn dim(&self) -> usize {
        self.oracle.dim()
    }
}

impl fmt::Debug for ProblemInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemInstance")
            .field("descriptor", &self.descriptor.to_string())
            .field("dim", &self.dim())
            .field("constants", &self.constants)
            .field("known_minimum_value", &self.known_minimum_value)
            .field("has_known_saddle", &self.known_saddle.is_some())
            .field("has_known_minimizer", &self.known_minimizer.is_some())
            .finish()
    }
}
