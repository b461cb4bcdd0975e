//! One run of the matching-attachment heuristic on a random 5-regular
//! bipartite graph, and the Monte Carlo harness around it.
//!
//! Every completed run also checks that the verifier's verdict agrees with the
//! f-derangement test on the matching permutation and the avoidance function.

use std::fmt;
use std::str::FromStr;

use crate::error::GraphError;
use crate::function::{is_f_derangement, PartialFunctionSpec, Permutation};
use crate::graph::{
    attach_matching, extract_avoidance_function, extract_end_avoidance_function, one_factorization, p4_decompose_with,
    random_regular_bipartite, verify_p5_decomposition, BipartiteGraph, Matching, P4Config, PathDecomposition, Side,
    Verification, Walk,
};
use crate::par::Exec;
use crate::seed::derive_seed;

/// Degree of the host graphs.
pub const HOST_DEGREE: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// First matching, start attachment only.
    SingleShot,
    /// Each of the five matchings of a 1-factorization, attached at the start
    /// and then at the end, until one works.
    AllTenOptions,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::SingleShot => "single",
            Strategy::AllTenOptions => "all10",
        })
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "single" => Ok(Strategy::SingleShot),
            "all10" => Ok(Strategy::AllTenOptions),
            other => Err(format!("unknown strategy '{other}' (expected single or all10)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialConfig {
    pub p4: P4Config,
    /// Extra P4 searches allowed after the first one exhausts its budget.
    pub max_retries: usize,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            p4: P4Config::default(),
            max_retries: 5,
        }
    }
}

/// Every artifact of a single attachment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineRun {
    pub matching: Matching,
    pub paths: PathDecomposition,
    pub side: Side,
    pub avoidance: PartialFunctionSpec,
    pub permutation: Permutation,
    pub walks: Vec<Walk>,
    pub verification: Verification,
    pub is_f_derangement: bool,
}

impl PipelineRun {
    pub fn success(&self) -> bool {
        self.verification.is_valid()
    }

    pub fn equivalence_ok(&self) -> bool {
        self.verification.is_valid() == self.is_f_derangement
    }
}

/// Attaches `m` to `paths` on `side` and evaluates both success criteria.
pub fn run_pipeline(
    g: &BipartiteGraph,
    m: &Matching,
    paths: &PathDecomposition,
    side: Side,
) -> Result<PipelineRun, GraphError> {
    let walks = attach_matching(paths, m, side)?;
    let verification = verify_p5_decomposition(g, &walks);
    let avoidance = match side {
        Side::Start => extract_avoidance_function(paths),
        Side::End => extract_end_avoidance_function(paths),
    };
    let permutation = m.as_permutation();
    let is_f_derangement =
        is_f_derangement(&permutation, &avoidance).expect("matching and paths share the vertex count");
    Ok(PipelineRun {
        matching: m.clone(),
        paths: paths.clone(),
        side,
        avoidance,
        permutation,
        walks,
        verification,
        is_f_derangement,
    })
}

/// Deletes `m` from `g` and searches the remainder, retrying with derived
/// seeds. `Ok(None)` when every search ran out of budget.
fn decompose_remainder(
    g: &BipartiteGraph,
    m: &Matching,
    seed: u64,
    config: &TrialConfig,
    retries: &mut usize,
) -> Result<Option<PathDecomposition>, GraphError> {
    let g4 = g.without_matching(m)?;
    for attempt in 0..=config.max_retries {
        match p4_decompose_with(&g4, derive_seed(seed, attempt as u64), config.p4) {
            Ok(paths) => return Ok(Some(paths)),
            Err(GraphError::BudgetExhausted { .. }) => *retries += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// Host graphs redrawn per trial when a layer exhausts its resamples.
pub const HOST_REDRAWS: u64 = 200;

/// Draws the 5-regular host, moving to a derived seed whenever the layer
/// sampler gives up. Near-forced final layers make this common for n < 10.
fn draw_host(n: usize, first_seed: u64) -> Result<(u64, BipartiteGraph), GraphError> {
    let mut graph_seed = first_seed;
    for redraw in 0..HOST_REDRAWS {
        match random_regular_bipartite(n, HOST_DEGREE, graph_seed) {
            Ok(g) => return Ok((graph_seed, g)),
            Err(GraphError::RejectionBudgetExceeded { .. }) => graph_seed = derive_seed(first_seed, redraw + 1),
            Err(e) => return Err(e),
        }
    }
    Err(GraphError::RejectionBudgetExceeded {
        attempts: HOST_REDRAWS as usize,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialOutcome {
    pub seed: u64,
    /// Seed the host graph was generated from. Differs from the trial's first
    /// graph seed when earlier draws ran out of layer resamples.
    pub graph_seed: u64,
    pub strategy: Strategy,
    /// Avoidance function and matching permutation of the last option tried.
    pub avoidance: Option<PartialFunctionSpec>,
    pub permutation: Option<Permutation>,
    pub success: bool,
    pub equivalence_ok: bool,
    pub options_tried: usize,
    /// `(matching index, side)` of the option that worked.
    pub winning_option: Option<(usize, Side)>,
    pub solver_retries: usize,
    /// No P4 decomposition was found; excluded from success rates.
    pub solver_failed: bool,
}

pub fn run_trial(n: usize, seed: u64, strategy: Strategy) -> Result<TrialOutcome, GraphError> {
    run_trial_with(n, seed, strategy, &TrialConfig::default())
}

pub fn run_trial_with(
    n: usize,
    seed: u64,
    strategy: Strategy,
    config: &TrialConfig,
) -> Result<TrialOutcome, GraphError> {
    if n < HOST_DEGREE {
        return Err(GraphError::DegreeTooLarge { n, d: HOST_DEGREE });
    }
    let (graph_seed, g) = draw_host(n, derive_seed(seed, 0))?;
    // the first factor is the matching removed before the path search
    let matchings = one_factorization(&g)?;
    let mut outcome = TrialOutcome {
        seed,
        graph_seed,
        strategy,
        avoidance: None,
        permutation: None,
        success: false,
        equivalence_ok: true,
        options_tried: 0,
        winning_option: None,
        solver_retries: 0,
        solver_failed: true,
    };
    let record = |outcome: &mut TrialOutcome, run: &PipelineRun, index: usize| {
        outcome.options_tried += 1;
        outcome.solver_failed = false;
        outcome.equivalence_ok &= run.equivalence_ok();
        outcome.avoidance = Some(run.avoidance.clone());
        outcome.permutation = Some(run.permutation.clone());
        if run.success() {
            outcome.success = true;
            outcome.winning_option = Some((index, run.side));
        }
    };
    match strategy {
        Strategy::SingleShot => {
            // a failed search moves on to the next matching
            for attempt in 0..=config.max_retries {
                let index = attempt % matchings.len();
                let m = &matchings[index];
                let search = TrialConfig {
                    max_retries: 0,
                    ..*config
                };
                let mut failed = 0;
                let seed_k = derive_seed(seed, 1 + attempt as u64);
                if let Some(paths) = decompose_remainder(&g, m, seed_k, &search, &mut failed)? {
                    let run = run_pipeline(&g, m, &paths, Side::Start)?;
                    record(&mut outcome, &run, index);
                    break;
                }
                outcome.solver_retries += failed;
            }
        }
        Strategy::AllTenOptions => {
            'options: for (index, m) in matchings.iter().enumerate() {
                let seed_k = derive_seed(seed, 1000 + index as u64);
                let Some(paths) = decompose_remainder(&g, m, seed_k, config, &mut outcome.solver_retries)? else {
                    continue;
                };
                for side in [Side::Start, Side::End] {
                    let run = run_pipeline(&g, m, &paths, side)?;
                    record(&mut outcome, &run, index);
                    if run.success() {
                        break 'options;
                    }
                }
            }
        }
    }
    Ok(outcome)
}

/// Two-sided 95% Wilson score interval.
pub fn wilson_interval(successes: usize, total: usize) -> (f64, f64) {
    if total == 0 {
        return (0.0, 1.0);
    }
    const Z: f64 = 1.959_963_984_540_054;
    let m = total as f64;
    let p = successes as f64 / m;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / m;
    let center = (p + z2 / (2.0 * m)) / denom;
    let half = Z * (p * (1.0 - p) / m + z2 / (4.0 * m * m)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloStats {
    pub n: usize,
    pub trials: usize,
    pub strategy: Strategy,
    pub master_seed: u64,
    /// Trials in which at least one option was evaluated.
    pub completed: usize,
    pub successes: usize,
    pub solver_failures: usize,
    /// `successes / completed`
    pub fraction: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub equivalence_violations: usize,
    pub solver_retries: usize,
    pub trials_with_retries: usize,
    pub options_tried: usize,
}

impl MonteCarloStats {
    /// Share of trials whose P4 search finished without any retry.
    pub fn first_try_rate(&self) -> f64 {
        1.0 - self.trials_with_retries as f64 / self.trials as f64
    }

    /// Share of trials that obtained a decomposition (retries allowed).
    pub fn solver_completion_rate(&self) -> f64 {
        self.completed as f64 / self.trials as f64
    }
}

/// Runs `trials` independent trials; trial `i` uses seed
/// `derive_seed(master_seed, i)`, so the result does not depend on `exec`.
pub fn monte_carlo(
    n: usize,
    trials: usize,
    strategy: Strategy,
    master_seed: u64,
    exec: Exec,
) -> Result<MonteCarloStats, GraphError> {
    monte_carlo_with(n, trials, strategy, master_seed, exec, &TrialConfig::default())
}

pub fn monte_carlo_with(
    n: usize,
    trials: usize,
    strategy: Strategy,
    master_seed: u64,
    exec: Exec,
    config: &TrialConfig,
) -> Result<MonteCarloStats, GraphError> {
    let outcomes = monte_carlo_outcomes(n, trials, strategy, master_seed, exec, config)?;
    Ok(summarize(n, strategy, master_seed, &outcomes))
}

pub fn monte_carlo_outcomes(
    n: usize,
    trials: usize,
    strategy: Strategy,
    master_seed: u64,
    exec: Exec,
    config: &TrialConfig,
) -> Result<Vec<TrialOutcome>, GraphError> {
    if trials == 0 {
        return Err(GraphError::InvalidArgument("trials must be at least 1".into()));
    }
    exec.map_range(trials, |i| {
        run_trial_with(n, derive_seed(master_seed, i as u64), strategy, config)
    })
    .into_iter()
    .collect()
}

pub fn summarize(n: usize, strategy: Strategy, master_seed: u64, outcomes: &[TrialOutcome]) -> MonteCarloStats {
    let completed = outcomes.iter().filter(|o| !o.solver_failed).count();
    let successes = outcomes.iter().filter(|o| o.success).count();
    let (wilson_low, wilson_high) = wilson_interval(successes, completed);
    MonteCarloStats {
        n,
        trials: outcomes.len(),
        strategy,
        master_seed,
        completed,
        successes,
        solver_failures: outcomes.len() - completed,
        fraction: if completed == 0 {
            0.0
        } else {
            successes as f64 / completed as f64
        },
        wilson_low,
        wilson_high,
        equivalence_violations: outcomes
            .iter()
            .filter(|o| !o.solver_failed && !o.equivalence_ok)
            .count(),
        solver_retries: outcomes.iter().map(|o| o.solver_retries).sum(),
        trials_with_retries: outcomes.iter().filter(|o| o.solver_retries > 0).count(),
        options_tried: outcomes.iter().map(|o| o.options_tried).sum(),
    }
}
