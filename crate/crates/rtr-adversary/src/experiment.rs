//! Driving a deterministic solver against the resisting oracle and
//! measuring the randomized escape from the revealed landscape.

use std::collections::VecDeque;
use std::sync::{Arc, Mutex};

use rtr_core::DenseVector;
use rtr_solver::{tr_run, SolverKind, TrustRegionConfig};

use crate::error::AdversaryError;
use crate::log::{resisting_oracle_answer, QueryLog};
use crate::reveal::reveal_hidden_function;

/// A solver playing the adversary game: it must produce each query as a
/// deterministic function of the transcript so far.
///
/// The driver calls [`begin`](Self::begin) once, then requests queries
/// one at a time until the solver returns `None` or the budget runs out.
/// After the budget is consumed, one extra `next_query` call may be made
/// (and discarded unanswered) to detect whether the solver was cut off.
pub trait DeterministicSolver {
    /// One-time notification of the ambient dimension and query budget,
    /// before the first query.
    fn begin(&mut self, dim: usize, budget: usize);

    /// The next (point, direction) query, or `None` when the solver has
    /// finished on its own. `history` holds every earlier query and the
    /// answer it received.
    fn next_query(&mut self, history: &QueryLog) -> Option<(DenseVector, DenseVector)>;
}

/// Transcript shared between the wrapped solver's oracle closures.
struct SentinelLog {
    queries: Vec<(DenseVector, DenseVector)>,
    budget: usize,
    /// The first query that arrived after the budget was spent — the
    /// evidence the run was truncated rather than finished.
    pending: Option<(DenseVector, DenseVector)>,
}

impl SentinelLog {
    /// Admits the query against the budget; over-budget queries park in
    /// `pending` instead and the caller must answer with a non-finite
    /// value, which the oracle layer turns into a fault that stops the
    /// trust-region run.
    fn admit(&mut self, x: &[f64], u: DenseVector) -> bool {
        let x = DenseVector::new(x.to_vec()).expect("oracle inputs are finite");
        if self.queries.len() >= self.budget {
            if self.pending.is_none() {
                self.pending = Some((x, u));
            }
            return false;
        }
        self.queries.push((x, u));
        true
    }
}

fn first_axis(dim: usize) -> DenseVector {
    DenseVector::from_fn(dim, |i| if i == 0 { 1.0 } else { 0.0 })
        .expect("unit vector entries are finite")
}

/// The baseline trust-region solver wrapped as a conforming adversary-game
/// player.
///
/// The wrapper forces `sigma = 0`, so no perturbation is ever sampled and
/// the run is literally deterministic. It simulates the trust-region loop
/// against a private copy of the resisting oracle — legitimate because
/// that oracle's answers `(|x|^2 / 2, x, u)` are a fixed function of the
/// query, so the simulation sees exactly what the driver would have
/// answered — and replays the recorded queries one at a time. Each oracle
/// call counts as one query: value and gradient calls are logged against
/// the first coordinate axis as a placeholder direction, Hessian-vector
/// calls against their actual direction.
pub struct WrappedTrustRegion {
    config: TrustRegionConfig,
    start: Option<DenseVector>,
    queue: VecDeque<(DenseVector, DenseVector)>,
    pending: Option<(DenseVector, DenseVector)>,
}

impl WrappedTrustRegion {
    /// Wraps a trust-region configuration, forcing `sigma = 0`.
    pub fn new(mut config: TrustRegionConfig) -> Result<Self, AdversaryError> {
        config.sigma = 0.0;
        config.validate()?;
        Ok(Self {
            config,
            start: None,
            queue: VecDeque::new(),
            pending: None,
        })
    }

    /// The stock deterministic baseline: truncated CG over the full
    /// trust region, default radii and acceptance thresholds.
    pub fn baseline() -> Self {
        let config = TrustRegionConfig {
            sigma: 0.0,
            solver: SolverKind::TcgClassic,
            ..TrustRegionConfig::default()
        };
        Self::new(config).expect("the stock configuration is valid")
    }

    /// Starts the wrapped run from `x0` instead of the origin.
    pub fn with_start(mut self, x0: DenseVector) -> Self {
        self.start = Some(x0);
        self
    }

    /// Runs the trust-region loop against the simulated resisting oracle,
    /// filling the query queue.
    fn simulate(&mut self, dim: usize, budget: usize) {
        let shared = Arc::new(Mutex::new(SentinelLog {
            queries: Vec::new(),
            budget,
            pending: None,
        }));

        let s = Arc::clone(&shared);
        let value_fn = Box::new(move |x: &[f64]| {
            let mut log = s.lock().expect("sentinel log lock");
            if log.admit(x, first_axis(x.len())) {
                0.5 * x.iter().map(|v| v * v).sum::<f64>()
            } else {
                f64::NAN
            }
        });
        let s = Arc::clone(&shared);
        let grad_fn = Box::new(move |x: &[f64]| {
            let mut log = s.lock().expect("sentinel log lock");
            if log.admit(x, first_axis(x.len())) {
                x.to_vec()
            } else {
                vec![f64::NAN; x.len()]
            }
        });
        let s = Arc::clone(&shared);
        let hvp_fn = Box::new(move |x: &[f64], u: &[f64]| {
            let mut log = s.lock().expect("sentinel log lock");
            let dir = DenseVector::new(u.to_vec()).expect("oracle inputs are finite");
            if log.admit(x, dir) {
                u.to_vec()
            } else {
                vec![f64::NAN; u.len()]
            }
        });

        let oracle = rtr_core::ObjectiveOracle::new(dim, value_fn, grad_fn, hvp_fn)
            .expect("dimension is validated by the driver");
        let x0 = self.start.clone().unwrap_or_else(|| DenseVector::zeros(dim));
        assert_eq!(x0.len(), dim, "start point dimension mismatch");

        // A budget fault ends the run through the oracle-fault path; any
        // outcome leaves the queries made so far as the transcript.
        let _ = tr_run(&oracle, x0, &self.config);

        let mut log = shared.lock().expect("sentinel log lock");
        self.queue = log.queries.drain(..).collect();
        self.pending = log.pending.take();
    }
}

impl DeterministicSolver for WrappedTrustRegion {
    fn begin(&mut self, dim: usize, budget: usize) {
        self.simulate(dim, budget);
    }

    fn next_query(&mut self, _history: &QueryLog) -> Option<(DenseVector, DenseVector)> {
        self.queue.pop_front().or_else(|| self.pending.take())
    }
}

/// Everything the adversary experiment measured.
#[derive(Debug, Clone)]
pub struct AdversaryReport {
    /// Ambient dimension `d`.
    pub dim: usize,
    /// Query budget `K`.
    pub budget: usize,
    /// Queries the solver actually made (at most the budget).
    pub queries_made: usize,
    /// Whether the budget cut the solver off with queries still to ask.
    pub truncated: bool,
    /// Dimension of the query span (at most `2 * queries_made`).
    pub span_dim: usize,
    /// Minimum of the revealed function over all queried points. The
    /// construction keeps this at `0` up to roundoff: a deterministic
    /// solver never sees below the hidden valley's rim.
    pub min_queried_value: f64,
    /// Global minimum of the revealed function (`-2`).
    pub revealed_min_value: f64,
    /// Distance from the origin to the revealed minimizer (`pi`).
    pub revealed_minimizer_norm: f64,
    /// Objective level the escape run is measured against.
    pub escape_threshold: f64,
    /// First outer iteration of the randomized escape run whose iterate
    /// was at or below the threshold, if any.
    pub escape_iterations: Option<usize>,
    /// Final objective value of the escape run.
    pub escape_final_f: f64,
}

impl AdversaryReport {
    /// Whether the randomized escape run reached the threshold.
    pub fn escaped(&self) -> bool {
        self.escape_iterations.is_some()
    }
}

/// Escape-run defaults: the randomized variant with its stock parameters.
fn default_escape_config() -> TrustRegionConfig {
    TrustRegionConfig::default()
}

/// Objective level below which the escape run counts as having left the
/// revealed saddle: halfway into the valley, unreachable from anything a
/// deterministic solver saw.
pub const DEFAULT_ESCAPE_THRESHOLD: f64 = -0.5;

/// Plays the adversary game and measures the randomized escape, with the
/// stock escape configuration; see
/// [`run_adversary_experiment_with`] for the knobs.
pub fn run_adversary_experiment(
    solver: &mut dyn DeterministicSolver,
    budget: usize,
    d: usize,
) -> Result<AdversaryReport, AdversaryError> {
    run_adversary_experiment_with(
        solver,
        budget,
        d,
        &default_escape_config(),
        DEFAULT_ESCAPE_THRESHOLD,
    )
}

/// Drives `solver` against the resisting oracle for at most `budget`
/// queries, reveals the hidden function, and runs the randomized
/// trust-region solver on it from the origin.
///
/// Requires `d >= 2 * budget + 1`: each query spends at most two
/// directions of span, so this guarantees at least one direction is left
/// to hide the valley in. The report's `min_queried_value` is the revealed
/// function evaluated at every queried point — the replay-consistency
/// property keeps it equal to the answers the solver actually received,
/// i.e. nonnegative, while `revealed_min_value` is `-2` a distance `pi`
/// away: the certificate that `budget` queries were not enough.
///
/// The escape run uses `escape_config` verbatim (the stock configuration
/// in [`run_adversary_experiment`]: the randomized variant, 100 outer
/// iterations) starting at the origin — the revealed saddle — and reports
/// the first iteration at or below `escape_threshold`.
pub fn run_adversary_experiment_with(
    solver: &mut dyn DeterministicSolver,
    budget: usize,
    d: usize,
    escape_config: &TrustRegionConfig,
    escape_threshold: f64,
) -> Result<AdversaryReport, AdversaryError> {
    if d < 2 * budget + 1 {
        return Err(AdversaryError::InvalidArgument(format!(
            "the lower-bound construction needs d >= 2 * budget + 1; got d = {d}, budget = {budget}"
        )));
    }

    let mut log = QueryLog::new(d)?;
    solver.begin(d, budget);
    let mut finished = false;
    for _ in 0..budget {
        match solver.next_query(&log) {
            Some((x, u)) => {
                resisting_oracle_answer(&x, &u, &mut log);
            }
            None => {
                finished = true;
                break;
            }
        }
    }
    // One unanswered probe distinguishes "spent the budget and stopped"
    // from "was cut off mid-run".
    let truncated = !finished && solver.next_query(&log).is_some();

    let revealed = reveal_hidden_function(&log, d)?;
    let mut min_queried = f64::INFINITY;
    for (x, _) in log.queries() {
        min_queried = min_queried.min(revealed.oracle.value(x)?);
    }

    let escape = tr_run(&revealed.oracle, DenseVector::zeros(d), escape_config)?;
    let escape_iterations = escape
        .records
        .iter()
        .position(|r| r.f_value <= escape_threshold)
        .or_else(|| (escape.final_f <= escape_threshold).then_some(escape.records.len()));

    let minimizer_norm = revealed
        .known_minimizer
        .as_ref()
        .map(|m| m.norm())
        .unwrap_or(f64::NAN);

    Ok(AdversaryReport {
        dim: d,
        budget,
        queries_made: log.len(),
        truncated,
        span_dim: log.span_dim(),
        min_queried_value: min_queried,
        revealed_min_value: revealed.known_minimum_value.unwrap_or(f64::NAN),
        revealed_minimizer_norm: minimizer_norm,
        escape_threshold,
        escape_iterations,
        escape_final_f: escape.final_f,
    })
}
