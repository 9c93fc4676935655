use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Constants of the sample-size schedules for kNN or kernel weights and the
/// uncertainty-set radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum ScheduleParams {
    /// `k_N = min(⌈k3 N^δ⌉, N − 1)` and `ε_N = k1 / N^p`.
    Knn { k1: f64, k3: f64, delta: f64, p: f64 },
    /// `h_N = k4 N^(−δ)` and `ε_N = k1 / N^p`.
    Kernel { k1: f64, k4: f64, delta: f64, p: f64 },
}

/// Schedule values at a given sample size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Schedule {
    Knn { k: usize, eps: f64 },
    Kernel { h: f64, eps: f64 },
}

impl Schedule {
    pub fn eps(&self) -> f64 {
        match *self {
            Schedule::Knn { eps, .. } | Schedule::Kernel { eps, .. } => eps,
        }
    }
}

impl ScheduleParams {
    /// Every inequality the constants violate for the given dimensions,
    /// each rendered as the required bound with its numeric value.
    pub fn violations(&self, d_gamma: usize, d_xi: usize) -> Vec<String> {
        let dg = d_gamma as f64;
        let dx = d_xi as f64;
        let mut out = Vec::new();
        let mut positive = |name: &str, v: f64| {
            if !(v > 0.0 && v.is_finite()) {
                out.push(format!("{name} > 0 (got {name} = {v})"));
            }
        };
        match *self {
            ScheduleParams::Knn { k1, k3, delta, p } => {
                positive("k1", k1);
                positive("k3", k3);
                positive("p", p);
                if !(delta > 0.5 && delta < 1.0) {
                    out.push(format!("1/2 < delta < 1 (got delta = {delta})"));
                }
                let a = (1.0 - delta) / dg;
                if !(p < a) {
                    out.push(format!("p < (1 - delta)/d_gamma = {a} (got p = {p})"));
                }
                let b = (2.0 * delta - 1.0) / (dx + 2.0);
                if !(p < b) {
                    out.push(format!("p < (2 delta - 1)/(d_xi + 2) = {b} (got p = {p})"));
                }
            }
            ScheduleParams::Kernel { k1, k4, delta, p } => {
                positive("k1", k1);
                positive("k4", k4);
                positive("p", p);
                let top = 1.0 / (2.0 * dg);
                if !(delta > 0.0 && delta < top) {
                    out.push(format!("0 < delta < 1/(2 d_gamma) = {top} (got delta = {delta})"));
                }
                if !(p < delta) {
                    out.push(format!("p < delta = {delta} (got p = {p})"));
                }
                let b = (1.0 - delta * dg) / (2.0 + dx);
                if !(p < b) {
                    out.push(format!("p < (1 - delta d_gamma)/(2 + d_xi) = {b} (got p = {p})"));
                }
            }
        }
        out
    }
}

/// Neighbor count or bandwidth together with the radius for `n` samples.
///
/// The neighbor count is at least one, so a single sample yields `k = 1`.
pub fn default_schedules(n: usize, d_gamma: usize, d_xi: usize, params: ScheduleParams) -> Result<Schedule> {
    if n == 0 || d_gamma == 0 || d_xi == 0 {
        return Err(Error::InvalidParameter("sample size and dimensions must be positive".into()));
    }
    let bad = params.violations(d_gamma, d_xi);
    if !bad.is_empty() {
        return Err(Error::InvalidParameter(format!("violated bound: {}", bad.join("; "))));
    }
    let nf = n as f64;
    Ok(match params {
        ScheduleParams::Knn { k1, k3, delta, p } => {
            let k = ((k3 * nf.powf(delta)).ceil() as usize).min(n - 1).max(1);
            Schedule::Knn { k, eps: k1 / nf.powf(p) }
        }
        ScheduleParams::Kernel { k1, k4, delta, p } => {
            Schedule::Kernel { h: k4 * nf.powf(-delta), eps: k1 / nf.powf(p) }
        }
    })
}
