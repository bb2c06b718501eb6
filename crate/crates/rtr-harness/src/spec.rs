//! Experiment spec files: grammar, parsing, and instantiation.
//!
//! A spec is a UTF-8 text file of `key = value` lines. Lines are
//! independent; blank lines are skipped and `#` starts a comment that
//! runs to the end of the line. Keys before the first `[variant]` header
//! configure the problem, the shared starting point, and the run plan;
//! each `[variant]` section then labels one solver configuration. Every
//! variant runs on the same problem instance from the same `x0`.
//!
//! ```text
//! # which objective, with family-specific parameters
//! problem = sine_saddle
//! d = 100000
//! problem_seed = 1
//!
//! # shared starting point and run plan
//! x0 = near_saddle
//! x0_offset = 1e-3
//! reps = 1
//! seed = 0
//!
//! [variant]
//! label = tcg_classic
//! solver = tcg_classic
//! sigma = 0
//!
//! [variant]
//! label = tcg_bg_1e-6
//! solver = tcg_bg
//! sigma = 1e-6
//! xi_rule = practical
//! ```
//!
//! Families and their keys (all seeds default to 0):
//!
//! * `sine_saddle`: `d`, `problem_seed`
//! * `rank_one`: `eigs` (comma-separated, strictly decreasing), `problem_seed`
//! * `psd_approx`: `n`, `r`, `density` (default 0.01), `problem_seed`
//! * `rect_approx`: `m`, `n`, `r`, `lambda` (default 0), `density`
//!   (default 0.01), `problem_seed`
//! * `worst_case_cosine`: `d`
//! * `synchronization`: `d`, `n`, `beta`, `problem_seed`
//!
//! Variant keys mirror the solver configuration: `label` (required,
//! `[A-Za-z0-9_.-]`), `solver` (`tcg_classic` | `tcg_bg`), `sigma`,
//! `rho_prime`, `rho_double_prime`, `delta0`, `delta_bar`, `omega1`,
//! `omega2`, `xi_rule` (`theory` | `practical`), `hessian_shift` (a
//! number, or `sqrt_eps_m` for the square root of machine epsilon),
//! `max_outer`, `grad_tol`, `max_inner`, `max_inner_cap`,
//! `keep_iterates`, `keep_xi`. Unset keys keep the solver defaults.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use rtr_core::{DenseVector, DeterministicRng};
use rtr_problems::{
    make_nonlinear_synchronization, make_psd_matrix_approx, make_rank_one_factorization,
    make_rect_matrix_approx, make_sine_saddle, make_worst_case_cosine, ProblemInstance,
};
use rtr_solver::{SolverKind, TrustRegionConfig, XiRule};

use crate::error::HarnessError;

/// Random stream for starting-point draws, distinct from the solver's
/// and the problem generator's streams.
pub const X0_RNG_STREAM: u64 = 3;

/// `sqrt(machine epsilon)` — the Hessian shift the experiments use.
pub const SQRT_EPS_M: f64 = 1.4901161193847656e-8;

/// How the shared starting point is derived from the problem instance.
#[derive(Debug, Clone, PartialEq)]
pub enum X0Rule {
    /// The origin.
    Origin,
    /// Exactly the instance's recorded saddle point.
    AtSaddle,
    /// The recorded saddle plus a uniform sphere direction scaled by
    /// `offset`.
    NearSaddle {
        /// Radius of the random offset.
        offset: f64,
    },
    /// A uniform sphere direction scaled by `scale`.
    Random {
        /// Norm of the starting point.
        scale: f64,
    },
    /// Gradient descent from a random point — the warm start that
    /// reliably parks the synchronization objective near a saddle.
    GdWarmstart {
        /// Fixed descent step size.
        step: f64,
        /// Number of descent iterations.
        iters: usize,
        /// Norm of the random point descent starts from.
        scale: f64,
    },
}

impl fmt::Display for X0Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            X0Rule::Origin => write!(f, "origin"),
            X0Rule::AtSaddle => write!(f, "at_saddle"),
            X0Rule::NearSaddle { offset } => write!(f, "near_saddle(offset = {offset})"),
            X0Rule::Random { scale } => write!(f, "random(scale = {scale})"),
            X0Rule::GdWarmstart { step, iters, scale } => {
                write!(f, "gd_warmstart(step = {step}, iters = {iters}, scale = {scale})")
            }
        }
    }
}

/// Which objective an experiment runs on, with generation parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSpec {
    /// Separable sine landscape with one shallow negative direction.
    SineSaddle { d: usize, seed: u64 },
    /// Symmetric rank-one factorization of a spectrally specified matrix.
    RankOne { eigs: Vec<f64>, seed: u64 },
    /// Low-rank positive semidefinite approximation of a sparse matrix.
    PsdApprox { n: usize, r: usize, density: f64, seed: u64 },
    /// Regularized low-rank approximation of a sparse rectangular matrix.
    RectApprox {
        m: usize,
        n: usize,
        r: usize,
        lambda: f64,
        density: f64,
        seed: u64,
    },
    /// Quadratic bowl with a cosine valley in the last coordinate.
    WorstCaseCosine { d: usize },
    /// Interacting particles with a norm-penalty, `n` points in `R^d`.
    Synchronization { d: usize, n: usize, beta: f64, seed: u64 },
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemSpec::SineSaddle { d, seed } => {
                write!(f, "sine_saddle(d = {d}, seed = {seed})")
            }
            ProblemSpec::RankOne { eigs, seed } => {
                let spectrum: Vec<String> = eigs.iter().map(|e| e.to_string()).collect();
                write!(f, "rank_one(eigs = [{}], seed = {seed})", spectrum.join(", "))
            }
            ProblemSpec::PsdApprox { n, r, density, seed } => {
                write!(f, "psd_approx(n = {n}, r = {r}, density = {density}, seed = {seed})")
            }
            ProblemSpec::RectApprox { m, n, r, lambda, density, seed } => write!(
                f,
                "rect_approx(m = {m}, n = {n}, r = {r}, lambda = {lambda}, \
                 density = {density}, seed = {seed})"
            ),
            ProblemSpec::WorstCaseCosine { d } => write!(f, "worst_case_cosine(d = {d})"),
            ProblemSpec::Synchronization { d, n, beta, seed } => {
                write!(f, "synchronization(d = {d}, n = {n}, beta = {beta}, seed = {seed})")
            }
        }
    }
}

impl ProblemSpec {
    /// Family name as spelled in spec files.
    pub fn name(&self) -> &'static str {
        match self {
            ProblemSpec::SineSaddle { .. } => "sine_saddle",
            ProblemSpec::RankOne { .. } => "rank_one",
            ProblemSpec::PsdApprox { .. } => "psd_approx",
            ProblemSpec::RectApprox { .. } => "rect_approx",
            ProblemSpec::WorstCaseCosine { .. } => "worst_case_cosine",
            ProblemSpec::Synchronization { .. } => "synchronization",
        }
    }

    /// Dimension of the optimization variable, without building the
    /// instance.
    pub fn dim(&self) -> usize {
        match *self {
            ProblemSpec::SineSaddle { d, .. } => d,
            ProblemSpec::RankOne { ref eigs, .. } => eigs.len(),
            ProblemSpec::PsdApprox { n, r, .. } => n * r,
            ProblemSpec::RectApprox { m, n, r, .. } => (m + n) * r,
            ProblemSpec::WorstCaseCosine { d } => d,
            ProblemSpec::Synchronization { d, n, .. } => d * n,
        }
    }

    /// Builds a fresh instance. Equal specs build bitwise-identical
    /// instances, so each worker can build its own copy.
    pub fn build(&self) -> Result<ProblemInstance, HarnessError> {
        let instance = match *self {
            ProblemSpec::SineSaddle { d, seed } => make_sine_saddle(d, seed)?,
            ProblemSpec::RankOne { ref eigs, seed } => make_rank_one_factorization(eigs, seed)?,
            ProblemSpec::PsdApprox { n, r, density, seed } => {
                make_psd_matrix_approx(n, r, density, seed)?
            }
            ProblemSpec::RectApprox { m, n, r, lambda, density, seed } => {
                make_rect_matrix_approx(m, n, r, lambda, density, seed)?
            }
            ProblemSpec::WorstCaseCosine { d } => make_worst_case_cosine(d)?,
            ProblemSpec::Synchronization { d, n, beta, seed } => {
                make_nonlinear_synchronization(d, n, beta, seed)?
            }
        };
        Ok(instance)
    }
}

/// One labeled solver configuration within an experiment.
#[derive(Debug, Clone)]
pub struct VariantSpec {
    /// Label used in file names and the CSV `variant` column.
    pub label: String,
    /// Full solver configuration (the per-run seed is filled in by the
    /// runner).
    pub config: TrustRegionConfig,
}

/// A parsed experiment: problem, starting-point rule, variants, and run
/// plan.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    /// Objective to build.
    pub problem: ProblemSpec,
    /// Shared starting-point rule.
    pub x0: X0Rule,
    /// Solver variants, in file order.
    pub variants: Vec<VariantSpec>,
    /// Number of repetitions; repetition `r` uses seed `base_seed + r`.
    pub reps: usize,
    /// Base seed for solver and starting-point randomness.
    pub base_seed: u64,
    /// Output directory named in the spec file, if any (the CLI and the
    /// environment provide fallbacks).
    pub out_dir: Option<PathBuf>,
}

fn invalid(msg: impl Into<String>) -> HarnessError {
    HarnessError::InvalidSpec(msg.into())
}

fn parse_f64(key: &str, value: &str) -> Result<f64, HarnessError> {
    value
        .parse::<f64>()
        .map_err(|_| invalid(format!("key `{key}` expects a number, got `{value}`")))
}

fn parse_usize(key: &str, value: &str) -> Result<usize, HarnessError> {
    value
        .parse::<usize>()
        .map_err(|_| invalid(format!("key `{key}` expects a nonnegative integer, got `{value}`")))
}

fn parse_u64(key: &str, value: &str) -> Result<u64, HarnessError> {
    value
        .parse::<u64>()
        .map_err(|_| invalid(format!("key `{key}` expects a nonnegative integer, got `{value}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, HarnessError> {
    match value {
        "true" | "1" => Ok(true),
        "false" | "0" => Ok(false),
        _ => Err(invalid(format!(
            "key `{key}` expects true/false, got `{value}`"
        ))),
    }
}

/// Raw `key = value` pairs of one section, with duplicate detection.
#[derive(Default)]
struct Section {
    pairs: BTreeMap<String, String>,
}

impl Section {
    fn insert(&mut self, key: &str, value: &str) -> Result<(), HarnessError> {
        if self
            .pairs
            .insert(key.to_string(), value.to_string())
            .is_some()
        {
            return Err(invalid(format!("duplicate key `{key}` in the same section")));
        }
        Ok(())
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.pairs.remove(key)
    }

    fn finish(self, where_: &str) -> Result<(), HarnessError> {
        if let Some(key) = self.pairs.keys().next() {
            return Err(invalid(format!("unknown key `{key}` in {where_}")));
        }
        Ok(())
    }
}

fn split_sections(text: &str) -> Result<(Section, Vec<Section>), HarnessError> {
    let mut global = Section::default();
    let mut variants: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if line == "[variant]" {
            variants.push(Section::default());
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            invalid(format!("line {}: expected `key = value`, got `{line}`", idx + 1))
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(invalid(format!(
                "line {}: empty key or value in `{line}`",
                idx + 1
            )));
        }
        match variants.last_mut() {
            Some(section) => section.insert(key, value)?,
            None => global.insert(key, value)?,
        }
    }
    Ok((global, variants))
}

fn parse_problem(global: &mut Section) -> Result<ProblemSpec, HarnessError> {
    let family = global
        .take("problem")
        .ok_or_else(|| invalid("missing required key `problem`"))?;
    let seed = match global.take("problem_seed") {
        Some(v) => parse_u64("problem_seed", &v)?,
        None => 0,
    };
    let req_usize = |global: &mut Section, key: &str| -> Result<usize, HarnessError> {
        let v = global
            .take(key)
            .ok_or_else(|| invalid(format!("problem `{family}` requires key `{key}`")))?;
        parse_usize(key, &v)
    };
    let opt_f64 = |global: &mut Section, key: &str, default: f64| -> Result<f64, HarnessError> {
        match global.take(key) {
            Some(v) => parse_f64(key, &v),
            None => Ok(default),
        }
    };
    match family.as_str() {
        "sine_saddle" => Ok(ProblemSpec::SineSaddle {
            d: req_usize(global, "d")?,
            seed,
        }),
        "rank_one" => {
            let raw = global
                .take("eigs")
                .ok_or_else(|| invalid("problem `rank_one` requires key `eigs`"))?;
            let eigs = raw
                .split(',')
                .map(|s| parse_f64("eigs", s.trim()))
                .collect::<Result<Vec<f64>, _>>()?;
            Ok(ProblemSpec::RankOne { eigs, seed })
        }
        "psd_approx" => Ok(ProblemSpec::PsdApprox {
            n: req_usize(global, "n")?,
            r: req_usize(global, "r")?,
            density: opt_f64(global, "density", 0.01)?,
            seed,
        }),
        "rect_approx" => Ok(ProblemSpec::RectApprox {
            m: req_usize(global, "m")?,
            n: req_usize(global, "n")?,
            r: req_usize(global, "r")?,
            lambda: opt_f64(global, "lambda", 0.0)?,
            density: opt_f64(global, "density", 0.01)?,
            seed,
        }),
        "worst_case_cosine" => Ok(ProblemSpec::WorstCaseCosine {
            d: req_usize(global, "d")?,
        }),
        "synchronization" => {
            let beta = global
                .take("beta")
                .ok_or_else(|| invalid("problem `synchronization` requires key `beta`"))?;
            Ok(ProblemSpec::Synchronization {
                d: req_usize(global, "d")?,
                n: req_usize(global, "n")?,
                beta: parse_f64("beta", &beta)?,
                seed,
            })
        }
        other => Err(invalid(format!("unknown problem family `{other}`"))),
    }
}

fn parse_x0(global: &mut Section) -> Result<X0Rule, HarnessError> {
    let rule = global.take("x0").unwrap_or_else(|| "origin".to_string());
    let offset = match global.take("x0_offset") {
        Some(v) => Some(parse_f64("x0_offset", &v)?),
        None => None,
    };
    let scale = match global.take("x0_scale") {
        Some(v) => Some(parse_f64("x0_scale", &v)?),
        None => None,
    };
    let gd_step = match global.take("gd_step") {
        Some(v) => Some(parse_f64("gd_step", &v)?),
        None => None,
    };
    let gd_iters = match global.take("gd_iters") {
        Some(v) => Some(parse_usize("gd_iters", &v)?),
        None => None,
    };
    let reject = |used: &str, keys: &[(&str, bool)]| -> Result<(), HarnessError> {
        for (name, set) in keys {
            if *set {
                return Err(invalid(format!("key `{name}` does not apply to x0 = {used}")));
            }
        }
        Ok(())
    };
    match rule.as_str() {
        "origin" => {
            reject(
                "origin",
                &[
                    ("x0_offset", offset.is_some()),
                    ("x0_scale", scale.is_some()),
                    ("gd_step", gd_step.is_some()),
                    ("gd_iters", gd_iters.is_some()),
                ],
            )?;
            Ok(X0Rule::Origin)
        }
        "at_saddle" => {
            reject(
                "at_saddle",
                &[
                    ("x0_offset", offset.is_some()),
                    ("x0_scale", scale.is_some()),
                    ("gd_step", gd_step.is_some()),
                    ("gd_iters", gd_iters.is_some()),
                ],
            )?;
            Ok(X0Rule::AtSaddle)
        }
        "near_saddle" => {
            reject(
                "near_saddle",
                &[
                    ("x0_scale", scale.is_some()),
                    ("gd_step", gd_step.is_some()),
                    ("gd_iters", gd_iters.is_some()),
                ],
            )?;
            Ok(X0Rule::NearSaddle {
                offset: offset.unwrap_or(1e-3),
            })
        }
        "random" => {
            reject(
                "random",
                &[
                    ("x0_offset", offset.is_some()),
                    ("gd_step", gd_step.is_some()),
                    ("gd_iters", gd_iters.is_some()),
                ],
            )?;
            Ok(X0Rule::Random {
                scale: scale.unwrap_or(1.0),
            })
        }
        "gd_warmstart" => {
            reject("gd_warmstart", &[("x0_offset", offset.is_some())])?;
            Ok(X0Rule::GdWarmstart {
                step: gd_step.unwrap_or(0.1),
                iters: gd_iters.unwrap_or(500),
                scale: scale.unwrap_or(1.0),
            })
        }
        other => Err(invalid(format!("unknown x0 rule `{other}`"))),
    }
}

fn parse_variant(mut section: Section, index: usize) -> Result<VariantSpec, HarnessError> {
    let label = section
        .take("label")
        .ok_or_else(|| invalid(format!("variant {} is missing key `label`", index + 1)))?;
    if label.is_empty()
        || !label
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-'))
    {
        return Err(invalid(format!(
            "variant label `{label}` may only use letters, digits, `_`, `.`, `-`"
        )));
    }

    let mut config = TrustRegionConfig::default();
    if let Some(v) = section.take("solver") {
        config.solver = match v.as_str() {
            "tcg_classic" => SolverKind::TcgClassic,
            "tcg_bg" => SolverKind::TcgBg,
            other => return Err(invalid(format!("unknown solver `{other}`"))),
        };
    }
    if let Some(v) = section.take("xi_rule") {
        config.xi_rule = match v.as_str() {
            "theory" => XiRule::Theory,
            "practical" => XiRule::Practical,
            other => return Err(invalid(format!("unknown xi_rule `{other}`"))),
        };
    }
    if let Some(v) = section.take("hessian_shift") {
        config.hessian_shift = if v == "sqrt_eps_m" {
            SQRT_EPS_M
        } else {
            parse_f64("hessian_shift", &v)?
        };
    }
    for (key, field) in [
        ("sigma", &mut config.sigma as &mut f64),
        ("rho_prime", &mut config.rho_prime),
        ("rho_double_prime", &mut config.rho_double_prime),
        ("delta0", &mut config.delta0),
        ("delta_bar", &mut config.delta_bar),
        ("omega1", &mut config.omega1),
        ("omega2", &mut config.omega2),
        ("grad_tol", &mut config.grad_tol),
    ] {
        if let Some(v) = section.take(key) {
            *field = parse_f64(key, &v)?;
        }
    }
    if let Some(v) = section.take("max_outer") {
        config.max_outer = parse_usize("max_outer", &v)?;
    }
    if let Some(v) = section.take("max_inner") {
        config.max_inner = Some(parse_usize("max_inner", &v)?);
    }
    if let Some(v) = section.take("max_inner_cap") {
        config.max_inner_cap = Some(parse_usize("max_inner_cap", &v)?);
    }
    if let Some(v) = section.take("keep_iterates") {
        config.keep_iterates = parse_bool("keep_iterates", &v)?;
    }
    if let Some(v) = section.take("keep_xi") {
        config.keep_xi = parse_bool("keep_xi", &v)?;
    }
    section.finish(&format!("variant `{label}`"))?;
    config.validate()?;
    Ok(VariantSpec { label, config })
}

impl ExperimentSpec {
    /// Parses spec text; see the module docs for the grammar.
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let (mut global, variant_sections) = split_sections(text)?;
        let problem = parse_problem(&mut global)?;
        let x0 = parse_x0(&mut global)?;
        let reps = match global.take("reps") {
            Some(v) => parse_usize("reps", &v)?,
            None => 1,
        };
        if reps == 0 {
            return Err(invalid("reps must be at least 1"));
        }
        let base_seed = match global.take("seed") {
            Some(v) => parse_u64("seed", &v)?,
            None => 0,
        };
        let out_dir = global.take("out").map(PathBuf::from);
        global.finish("the global section")?;

        if variant_sections.is_empty() {
            return Err(invalid("no variants: at least one [variant] section is required"));
        }
        let mut variants = Vec::with_capacity(variant_sections.len());
        for (i, section) in variant_sections.into_iter().enumerate() {
            variants.push(parse_variant(section, i)?);
        }
        let mut labels: Vec<&str> = variants.iter().map(|v| v.label.as_str()).collect();
        labels.sort_unstable();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!("duplicate variant label `{}`", w[0])));
        }

        Ok(ExperimentSpec {
            problem,
            x0,
            variants,
            reps,
            base_seed,
            out_dir,
        })
    }

    /// Reads and parses a spec file.
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::io(path.display().to_string(), e))?;
        Self::parse(&text).map_err(|e| match e {
            HarnessError::InvalidSpec(msg) => {
                invalid(format!("{}: {msg}", path.display()))
            }
            other => other,
        })
    }

    /// Derives the shared starting point for one repetition.
    ///
    /// Random draws come from the dedicated stream [`X0_RNG_STREAM`]
    /// seeded with `seed`, so every variant of the repetition sees the
    /// same point and reruns reproduce it.
    pub fn derive_x0(
        &self,
        instance: &ProblemInstance,
        seed: u64,
    ) -> Result<DenseVector, HarnessError> {
        let dim = instance.dim();
        let mut rng = DeterministicRng::new(seed, X0_RNG_STREAM);
        let x0 = match self.x0 {
            X0Rule::Origin => DenseVector::zeros(dim),
            X0Rule::AtSaddle => instance.known_saddle.clone().ok_or_else(|| {
                invalid(format!(
                    "x0 = at_saddle, but problem `{}` records no saddle point",
                    instance.descriptor
                ))
            })?,
            X0Rule::NearSaddle { offset } => {
                let saddle = instance.known_saddle.clone().ok_or_else(|| {
                    invalid(format!(
                        "x0 = near_saddle, but problem `{}` records no saddle point",
                        instance.descriptor
                    ))
                })?;
                saddle.add(&rng.unit_sphere(dim).scaled(offset))
            }
            X0Rule::Random { scale } => rng.unit_sphere(dim).scaled(scale),
            X0Rule::GdWarmstart { step, iters, scale } => {
                let mut x = rng.unit_sphere(dim).scaled(scale);
                for _ in 0..iters {
                    let g = instance.oracle.grad(&x)?;
                    x.axpy_in(-step, &g);
                }
                x
            }
        };
        Ok(x0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_round_trip_spec_parses_to_the_expected_fields() {
        let text = "\
# sine saddle, two variants
problem = sine_saddle
d = 40            # dimension
problem_seed = 7
x0 = near_saddle
x0_offset = 1e-3
reps = 2
seed = 5
out = runs/demo

[variant]
label = classic
solver = tcg_classic
sigma = 0

[variant]
label = bg
solver = tcg_bg
sigma = 1e-6
xi_rule = practical
hessian_shift = sqrt_eps_m
";
        let spec = ExperimentSpec::parse(text).unwrap();
        assert_eq!(spec.problem, ProblemSpec::SineSaddle { d: 40, seed: 7 });
        assert_eq!(spec.x0, X0Rule::NearSaddle { offset: 1e-3 });
        assert_eq!(spec.reps, 2);
        assert_eq!(spec.base_seed, 5);
        assert_eq!(spec.out_dir.as_deref(), Some(Path::new("runs/demo")));
        assert_eq!(spec.variants.len(), 2);
        assert_eq!(spec.variants[0].label, "classic");
        assert_eq!(spec.variants[0].config.solver, SolverKind::TcgClassic);
        assert_eq!(spec.variants[0].config.sigma, 0.0);
        assert_eq!(spec.variants[1].config.hessian_shift, SQRT_EPS_M);
        assert_eq!(spec.variants[1].config.xi_rule, XiRule::Practical);
    }

    #[test]
    fn malformed_specs_are_rejected_with_named_keys() {
        let no_variant = "problem = sine_saddle\nd = 10\n";
        let err = ExperimentSpec::parse(no_variant).unwrap_err();
        assert!(err.to_string().contains("no variants"), "{err}");

        let unknown = "problem = sine_saddle\nd = 10\nwat = 1\n[variant]\nlabel = a\n";
        let err = ExperimentSpec::parse(unknown).unwrap_err();
        assert!(err.to_string().contains("unknown key `wat`"), "{err}");

        let dup = "problem = sine_saddle\nd = 10\n[variant]\nlabel = a\n[variant]\nlabel = a\n";
        let err = ExperimentSpec::parse(dup).unwrap_err();
        assert!(err.to_string().contains("duplicate variant label"), "{err}");

        let bad_label = "problem = sine_saddle\nd = 10\n[variant]\nlabel = a,b\n";
        let err = ExperimentSpec::parse(bad_label).unwrap_err();
        assert!(err.to_string().contains("label"), "{err}");
    }

    #[test]
    fn x0_keys_are_validated_against_the_rule() {
        let text = "problem = sine_saddle\nd = 10\nx0 = origin\nx0_offset = 0.1\n[variant]\nlabel = a\n";
        let err = ExperimentSpec::parse(text).unwrap_err();
        assert!(err.to_string().contains("does not apply"), "{err}");
    }
}
