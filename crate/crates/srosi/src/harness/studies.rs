//! Asymptotic studies on the newsvendor generator at the query `γ̄ = 0.5`,
//! whose conditional law is `U[0.5, 1.5]`.

use super::experiment::replication_seed;
use super::generators::{gen_newsvendor, newsvendor_oracle};
use super::results::{ConcentrationRow, ConvergenceRow};
use crate::error::{Error, Result};
use crate::norm::Norm;
use crate::srolp::{newsvendor_problem, solve_sro, Support, UncertaintySpec};
use crate::transport::{empirical_conditional, wasserstein1_1d_vs_uniform};
use crate::weights::{
    default_schedules, kernel_weights, knn_weights, Dataset, KernelKind, Schedule, ScheduleParams, WeightVector,
};
use serde::{Deserialize, Serialize};

/// Side information at which both studies are run.
pub const STUDY_QUERY: f64 = 0.5;

fn scheduled_weights(data: &Dataset, schedule: &Schedule) -> Result<WeightVector> {
    match *schedule {
        Schedule::Knn { k, .. } => knn_weights(data, &[STUDY_QUERY], k),
        Schedule::Kernel { h, .. } => kernel_weights(data, &[STUDY_QUERY], h, KernelKind::Gaussian),
    }
}

/// Schema version of [`StudyConfig`] documents.
pub const STUDY_SCHEMA_VERSION: u32 = 1;

/// Settings of a concentration or convergence study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    pub version: u32,
    pub n_grid: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub schedule: ScheduleParams,
}

impl StudyConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: serde_json::Value = serde_json::from_str(text)?;
        let version = raw.get("version").and_then(|v| v.as_u64());
        if version != Some(STUDY_SCHEMA_VERSION as u64) {
            return Err(Error::Parse(format!(
                "study config version {version:?} is not supported (expected {STUDY_SCHEMA_VERSION})"
            )));
        }
        let cfg: Self = serde_json::from_value(raw)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Checks the grid and the schedule at every sample size.
    pub fn validate(&self) -> Result<()> {
        check_grid(&self.n_grid, self.reps)?;
        for &n in &self.n_grid {
            default_schedules(n, 1, 1, self.schedule)?;
        }
        Ok(())
    }
}

fn check_grid(n_grid: &[usize], reps: usize) -> Result<()> {
    if n_grid.is_empty() || n_grid.contains(&0) || reps == 0 {
        return Err(Error::InvalidParameter("sample sizes and replication count must be positive".into()));
    }
    Ok(())
}

/// Wasserstein-1 distance between the weighted empirical conditional law
/// and the true conditional law, for every sample size and replication.
/// Kernel schedules use the Gaussian kernel.
pub fn run_concentration(
    n_grid: &[usize],
    reps: usize,
    schedule: ScheduleParams,
    seed: u64,
) -> Result<Vec<ConcentrationRow>> {
    check_grid(n_grid, reps)?;
    let mut rows = Vec::new();
    for &n in n_grid {
        let s = default_schedules(n, 1, 1, schedule)?;
        for rep in 0..reps {
            let data = gen_newsvendor(n, replication_seed(seed, n, rep));
            let mu = empirical_conditional(&data, &scheduled_weights(&data, &s)?)?;
            let d1 = wasserstein1_1d_vs_uniform(&mu, STUDY_QUERY, STUDY_QUERY + 1.0)?;
            rows.push(ConcentrationRow { n, rep, d1, eps: s.eps() });
        }
    }
    Ok(rows)
}

/// Optimal value of the weighted sample-robust newsvendor (`h = b = 1`)
/// with scheduled weights and radius, next to the true optimal value.
pub fn run_convergence(
    n_grid: &[usize],
    reps: usize,
    schedule: ScheduleParams,
    seed: u64,
) -> Result<Vec<ConvergenceRow>> {
    check_grid(n_grid, reps)?;
    let prob = newsvendor_problem(1.0, 1.0)?;
    let (_, v_star) = newsvendor_oracle(STUDY_QUERY);
    let mut rows = Vec::new();
    for &n in n_grid {
        let s = default_schedules(n, 1, 1, schedule)?;
        let u = UncertaintySpec::new(s.eps(), Norm::LInf, Support::NonnegOrthant)?;
        for rep in 0..reps {
            let data = gen_newsvendor(n, replication_seed(seed, n, rep));
            let w = scheduled_weights(&data, &s)?;
            let v_hat = solve_sro(&prob, &data, &w, &u, false)?.objective;
            rows.push(ConvergenceRow { n, rep, v_hat, v_star });
        }
    }
    Ok(rows)
}
