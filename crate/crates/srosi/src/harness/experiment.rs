//! Out-of-sample comparison of the methods on synthetic data.

use super::generators::{
    rng_from, shipment_params, Generator, GeneratorKind, GeneratorSpec, NewsvendorGen, PortfolioGen, SeasonalDemandGen,
};
use super::methods::{KnnRule, Method, WeightKind, WeightSpec};
use super::results::{ResultRow, STATUS_OK};
use crate::error::{Error, Result};
use crate::lp::{Backend, InteriorOptions};
use crate::norm::Norm;
use crate::singleperiod::{solve_cvar_portfolio, PortfolioProblem};
use crate::srolp::{
    evaluate_policy, inventory_problem, newsvendor_problem, shipment_problem, solve_sro_with, DynamicProblem,
    InventoryParams, PrimaryPolicy, SetEncoding, SroOptions, Support, UncertaintySpec,
};
use crate::weights::{Dataset, ForestParams, KernelKind, WeightVector, DEFAULT_MAX_DEPTH, DEFAULT_MIN_LEAF};
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

/// Schema version of [`ExperimentConfig`] documents.
pub const EXPERIMENT_SCHEMA_VERSION: u32 = 1;

/// Candidate weight parameters; every learned method is tuned over the
/// grid of its family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeightGrid {
    pub knn_k: Vec<KnnRule>,
    pub kernel: KernelKind,
    pub kernel_h: Vec<f64>,
    pub cart_min_leaf: Vec<usize>,
    pub cart_max_depth: usize,
    pub rf_trees: usize,
    pub rf_min_leaf: Vec<usize>,
    pub rf_max_depth: usize,
}

impl Default for WeightGrid {
    fn default() -> Self {
        Self {
            knn_k: vec![KnnRule::Power { scale: 1.0, power: 0.75 }],
            kernel: KernelKind::Gaussian,
            kernel_h: vec![0.5, 1.0],
            cart_min_leaf: vec![DEFAULT_MIN_LEAF],
            cart_max_depth: DEFAULT_MAX_DEPTH,
            rf_trees: 100,
            rf_min_leaf: vec![DEFAULT_MIN_LEAF],
            rf_max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

/// LP settings of the multi-stage methods.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub backend: Backend,
    pub encoding: SetEncoding,
    pub tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { backend: Backend::Auto, encoding: SetEncoding::Vertices, tol: 1e-8 }
    }
}

/// Portfolio constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PortfolioConfig {
    pub alpha: f64,
    pub lambda: f64,
}

impl Default for PortfolioConfig {
    fn default() -> Self {
        Self { alpha: 0.05, lambda: 1.0 }
    }
}

/// Newsvendor overage and underage costs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NewsvendorConfig {
    pub h: f64,
    pub b: f64,
}

impl Default for NewsvendorConfig {
    fn default() -> Self {
        Self { h: 1.0, b: 1.0 }
    }
}

fn default_queries() -> usize {
    20
}
fn default_draws() -> usize {
    100
}
fn default_split() -> f64 {
    0.25
}
fn default_norm() -> Norm {
    Norm::L1
}

/// An experiment: for every `N` of `n_grid` and every replication, draw a
/// training set, tune every method on a validation split, then score it on
/// a shared test set of query points with conditional draws at each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub version: u32,
    pub generator: GeneratorSpec,
    pub methods: Vec<Method>,
    /// Radii tried by the robust methods; nonpositive entries are ignored by them.
    #[serde(default)]
    pub eps_grid: Vec<f64>,
    #[serde(default)]
    pub weights: WeightGrid,
    pub n_grid: Vec<usize>,
    pub reps: usize,
    /// Query points of the test set.
    #[serde(default = "default_queries")]
    pub test_queries: usize,
    /// Conditional draws at every query point.
    #[serde(default = "default_draws")]
    pub test_draws: usize,
    #[serde(default = "default_split")]
    pub validation_fraction: f64,
    #[serde(default = "default_norm")]
    pub norm: Norm,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub portfolio: PortfolioConfig,
    #[serde(default)]
    pub newsvendor: NewsvendorConfig,
    /// Worker threads; zero uses the available parallelism.
    #[serde(default)]
    pub threads: usize,
}

impl ExperimentConfig {
    /// A configuration with default settings for everything but the
    /// generator, methods, radii, sample sizes and replication count.
    pub fn new(
        generator: GeneratorSpec,
        methods: Vec<Method>,
        eps_grid: Vec<f64>,
        n_grid: Vec<usize>,
        reps: usize,
    ) -> Self {
        Self {
            version: EXPERIMENT_SCHEMA_VERSION,
            generator,
            methods,
            eps_grid,
            weights: WeightGrid::default(),
            n_grid,
            reps,
            test_queries: default_queries(),
            test_draws: default_draws(),
            validation_fraction: default_split(),
            norm: default_norm(),
            solver: SolverConfig::default(),
            portfolio: PortfolioConfig::default(),
            newsvendor: NewsvendorConfig::default(),
            threads: 0,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: serde_json::Value = serde_json::from_str(text)?;
        let version = raw.get("version").and_then(|v| v.as_u64());
        if version != Some(EXPERIMENT_SCHEMA_VERSION as u64) {
            return Err(Error::Parse(format!(
                "experiment config version {version:?} is not supported (expected {EXPERIMENT_SCHEMA_VERSION})"
            )));
        }
        let cfg: Self = serde_json::from_value(raw)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.version != EXPERIMENT_SCHEMA_VERSION {
            return bad(format!("config version {} is not supported", self.version));
        }
        if self.methods.is_empty() || self.n_grid.is_empty() {
            return bad("methods and n_grid must be nonempty".into());
        }
        if self.reps == 0 || self.test_queries == 0 || self.test_draws == 0 {
            return bad("reps, test_queries and test_draws must be positive".into());
        }
        if self.n_grid.contains(&0) {
            return bad("sample sizes must be positive".into());
        }
        if !(self.validation_fraction > 0.0 && self.validation_fraction < 1.0) {
            return bad(format!("validation_fraction must lie in (0, 1), got {}", self.validation_fraction));
        }
        if self.eps_grid.iter().any(|e| !(e.is_finite() && *e >= 0.0)) {
            return bad("radii must be finite and nonnegative".into());
        }
        if self.methods.iter().any(|m| m.robust()) && self.robust_radii().is_empty() {
            return bad("robust methods need a positive radius in eps_grid".into());
        }
        if self.norm == Norm::L2 {
            return bad("l2 uncertainty sets are not supported".into());
        }
        let g = &self.weights;
        for kind in self.methods.iter().filter_map(|m| m.weights()) {
            let empty = match kind {
                WeightKind::Knn => g.knn_k.is_empty(),
                WeightKind::Kernel => g.kernel_h.is_empty() || g.kernel_h.iter().any(|h| !(*h > 0.0)),
                WeightKind::Cart => g.cart_min_leaf.is_empty() || g.cart_max_depth == 0,
                WeightKind::Rf => g.rf_min_leaf.is_empty() || g.rf_trees == 0 || g.rf_max_depth == 0,
            };
            if empty {
                return bad(format!("weight grid for {} is empty or invalid", kind.name()));
            }
        }
        if self.generator.kind == GeneratorKind::Portfolio {
            PortfolioProblem::new(1, self.portfolio.alpha, self.portfolio.lambda)?;
        }
        if !(self.solver.tol > 0.0) {
            return bad("solver tolerance must be positive".into());
        }
        Ok(())
    }

    fn robust_radii(&self) -> Vec<f64> {
        self.eps_grid.iter().copied().filter(|&e| e > 0.0).collect()
    }

    /// `(ε, weights)` candidates of a method.
    pub fn candidates(&self, method: Method, d_gamma: usize, rf_seed: u64) -> Vec<(f64, WeightSpec)> {
        let radii = if method.robust() { self.robust_radii() } else { vec![0.0] };
        let g = &self.weights;
        let specs: Vec<WeightSpec> = match method.weights() {
            None => vec![WeightSpec::Uniform],
            Some(WeightKind::Knn) => g.knn_k.iter().map(|&k| WeightSpec::Knn { k }).collect(),
            Some(WeightKind::Kernel) => {
                g.kernel_h.iter().map(|&h| WeightSpec::Kernel { kernel: g.kernel, h }).collect()
            }
            Some(WeightKind::Cart) => g
                .cart_min_leaf
                .iter()
                .map(|&min_leaf| WeightSpec::Cart { min_leaf, max_depth: g.cart_max_depth })
                .collect(),
            Some(WeightKind::Rf) => g
                .rf_min_leaf
                .iter()
                .map(|&min_leaf| {
                    let params = ForestParams {
                        n_trees: g.rf_trees,
                        min_leaf,
                        max_depth: g.rf_max_depth,
                        ..ForestParams::defaults(d_gamma)
                    };
                    WeightSpec::Rf { params, seed: rf_seed }
                })
                .collect(),
        };
        radii.iter().flat_map(|&e| specs.iter().map(move |s| (e, s.clone()))).collect()
    }
}

/// The decision problem behind a generator.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum Task {
    Dynamic { prob: DynamicProblem, opts: SroOptions, norm: Norm },
    Portfolio { prob: PortfolioProblem, norm: Norm },
}

/// A solved decision.
#[derive(Debug, Clone, PartialEq)]
pub enum Decision {
    Policy(PrimaryPolicy),
    Portfolio { x: Vec<f64>, beta: f64 },
}

impl Task {
    pub fn for_config(cfg: &ExperimentConfig) -> Result<Self> {
        let opts = SroOptions {
            backend: cfg.solver.backend,
            encoding: cfg.solver.encoding,
            interior: InteriorOptions { tol: cfg.solver.tol, ..InteriorOptions::default() },
            ..SroOptions::default()
        };
        let dynamic = |prob| Task::Dynamic { prob, opts, norm: cfg.norm };
        Ok(match cfg.generator.kind {
            GeneratorKind::Newsvendor => dynamic(newsvendor_problem(cfg.newsvendor.h, cfg.newsvendor.b)?),
            GeneratorKind::Inventory => dynamic(inventory_problem(&InventoryParams::two_supplier())?),
            GeneratorKind::Shipment => dynamic(shipment_problem(&shipment_params())?),
            GeneratorKind::Portfolio => Task::Portfolio {
                prob: PortfolioProblem::new(
                    super::generators::PORTFOLIO_ASSETS,
                    cfg.portfolio.alpha,
                    cfg.portfolio.lambda,
                )?,
                norm: cfg.norm,
            },
        })
    }

    pub fn solve(&self, data: &Dataset, w: &WeightVector, eps: f64) -> Result<Decision> {
        match self {
            Task::Dynamic { prob, opts, norm } => {
                let u = UncertaintySpec::new(eps, *norm, Support::NonnegOrthant)?;
                Ok(Decision::Policy(solve_sro_with(prob, data, w, &u, opts)?.policy.primary))
            }
            Task::Portfolio { prob, norm } => {
                let s = solve_cvar_portfolio(prob, data, w, eps, *norm)?;
                Ok(Decision::Portfolio { x: s.x, beta: s.beta })
            }
        }
    }

    /// Realized cost of a decision under one scenario.
    pub fn cost(&self, d: &Decision, zeta: &[f64]) -> Result<f64> {
        match (self, d) {
            (Task::Dynamic { prob, .. }, Decision::Policy(p)) => evaluate_policy(prob, p, zeta),
            (Task::Portfolio { prob, .. }, Decision::Portfolio { x, beta }) => Ok(prob.scenario_cost(x, *beta, zeta)),
            _ => Err(Error::InvalidParameter("decision does not belong to this task".into())),
        }
    }

    /// Out-of-sample cost at one query point: the mean realized cost over
    /// the draws, or for portfolios the mean–cVaR objective of the draws.
    pub fn query_cost(&self, d: &Decision, draws: &[Vec<f64>]) -> Result<f64> {
        match (self, d) {
            (Task::Portfolio { prob, .. }, Decision::Portfolio { x, .. }) => Ok(prob.realized_objective(x, draws)),
            _ => {
                let total = draws.iter().map(|z| self.cost(d, z)).sum::<Result<f64>>()?;
                Ok(total / draws.len() as f64)
            }
        }
    }
}

/// The generator behind a kind.
pub fn generator_for(kind: GeneratorKind) -> Box<dyn Generator + Send + Sync> {
    match kind {
        GeneratorKind::Newsvendor => Box::new(NewsvendorGen),
        GeneratorKind::Inventory => Box::new(SeasonalDemandGen { len: 12, staged: true }),
        GeneratorKind::Portfolio => Box::new(PortfolioGen),
        GeneratorKind::Shipment => {
            Box::new(SeasonalDemandGen { len: super::generators::SHIPMENT_LOCATIONS, staged: false })
        }
    }
}

/// Seed of one replication, mixed with splitmix64.
pub fn replication_seed(seed: u64, n: usize, rep: usize) -> u64 {
    let mut z =
        seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (rep as u64).wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Query points and conditional draws shared by all methods of a replication.
#[derive(Debug, Clone, PartialEq)]
pub struct TestSet {
    pub queries: Vec<Vec<f64>>,
    pub draws: Vec<Vec<Vec<f64>>>,
}

impl TestSet {
    pub fn draw(gen: &dyn Generator, queries: usize, draws: usize, rng: &mut ChaCha8Rng) -> Self {
        let queries: Vec<Vec<f64>> = (0..queries).map(|_| gen.sample_gamma(rng)).collect();
        let draws = queries.iter().map(|q| (0..draws).map(|_| gen.sample_xi(q, rng)).collect()).collect();
        Self { queries, draws }
    }
}

/// Mean out-of-sample cost of one `(ε, weights)` choice trained on `train`.
pub fn test_cost(task: &Task, train: &Dataset, eps: f64, spec: &WeightSpec, test: &TestSet) -> Result<f64> {
    let model = spec.fit(train)?;
    let mut total = 0.0;
    let mut shared: Option<Decision> = None;
    for (q, draws) in test.queries.iter().zip(&test.draws) {
        let decision = if model.is_uniform() {
            if shared.is_none() {
                shared = Some(task.solve(train, &model.weights(q)?, eps)?);
            }
            shared.clone().expect("set above")
        } else {
            task.solve(train, &model.weights(q)?, eps)?
        };
        total += task.query_cost(&decision, draws)?;
    }
    Ok(total / test.queries.len() as f64)
}

/// Mean realized cost over held-out samples, each decided with weights at
/// its own side information.
fn validation_cost(task: &Task, fit: &Dataset, held: &Dataset, eps: f64, spec: &WeightSpec) -> Result<f64> {
    let model = spec.fit(fit)?;
    let mut total = 0.0;
    let mut shared: Option<Decision> = None;
    for (g, xi) in held.gammas.iter().zip(&held.xis) {
        let decision = if model.is_uniform() {
            if shared.is_none() {
                shared = Some(task.solve(fit, &model.weights(g)?, eps)?);
            }
            shared.clone().expect("set above")
        } else {
            task.solve(fit, &model.weights(g)?, eps)?
        };
        total += task.cost(&decision, xi)?;
    }
    Ok(total / held.len() as f64)
}

/// Picks the candidate with the lowest validation cost; the first wins ties.
/// A single candidate is returned without validation.
pub fn tune(
    task: &Task,
    train: &Dataset,
    split: &[usize],
    fraction: f64,
    candidates: &[(f64, WeightSpec)],
) -> Result<(f64, WeightSpec)> {
    if candidates.len() == 1 || train.len() < 2 {
        return Ok(candidates[0].clone());
    }
    let n_val = ((fraction * train.len() as f64).ceil() as usize).clamp(1, train.len() - 1);
    let (held_idx, fit_idx) = split.split_at(n_val);
    let (fit, held) = (train.subset(fit_idx), train.subset(held_idx));
    let mut best: Option<(f64, usize)> = None;
    for (c, (eps, spec)) in candidates.iter().enumerate() {
        let v = validation_cost(task, &fit, &held, *eps, spec)?;
        if best.is_none_or(|(b, _)| v < b) {
            best = Some((v, c));
        }
    }
    Ok(candidates[best.expect("at least two candidates").1].clone())
}

/// Runs every method on replication `rep` at sample size `n`.
pub fn run_replication(cfg: &ExperimentConfig, task: &Task, n: usize, rep: usize) -> Vec<ResultRow> {
    let seed = replication_seed(cfg.generator.seed, n, rep);
    let mut rng = rng_from(seed);
    let gen = generator_for(cfg.generator.kind);
    let train = gen.dataset(n, &mut rng);
    let test = TestSet::draw(gen.as_ref(), cfg.test_queries, cfg.test_draws, &mut rng);
    let mut split: Vec<usize> = (0..n).collect();
    split.shuffle(&mut rng);
    cfg.methods
        .iter()
        .map(|&method| {
            let start = Instant::now();
            let candidates = cfg.candidates(method, gen.d_gamma(), seed ^ 0x5EED);
            let outcome = tune(task, &train, &split, cfg.validation_fraction, &candidates)
                .and_then(|(eps, spec)| Ok((eps, spec.describe(n), test_cost(task, &train, eps, &spec, &test)?)));
            let solve_s = start.elapsed().as_secs_f64();
            match outcome {
                Ok((eps, params, cost)) => ResultRow {
                    method: method.to_string(),
                    n,
                    eps,
                    params,
                    rep,
                    oos_cost: Some(cost),
                    solve_s,
                    status: STATUS_OK.into(),
                },
                Err(e) => ResultRow {
                    method: method.to_string(),
                    n,
                    eps: f64::NAN,
                    params: String::new(),
                    rep,
                    oos_cost: None,
                    solve_s,
                    status: format!("failed: {e}"),
                },
            }
        })
        .collect()
}

/// Runs all replications, in parallel when several threads are available.
/// Rows are ordered by sample size, replication and method regardless of
/// scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let task = Task::for_config(cfg)?;
    let jobs: Vec<(usize, usize)> = cfg.n_grid.iter().flat_map(|&n| (0..cfg.reps).map(move |r| (n, r))).collect();
    let threads =
        if cfg.threads == 0 { std::thread::available_parallelism().map_or(1, |t| t.get()) } else { cfg.threads }
            .min(jobs.len());
    let next = AtomicUsize::new(0);
    let out: Mutex<Vec<Option<Vec<ResultRow>>>> = Mutex::new(vec![None; jobs.len()]);
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let j = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(n, rep)) = jobs.get(j) else { break };
                let rows = run_replication(cfg, &task, n, rep);
                out.lock().expect("no worker panics while holding the lock")[j] = Some(rows);
            });
        }
    });
    Ok(out.into_inner().expect("workers finished").into_iter().flatten().flatten().collect())
}
