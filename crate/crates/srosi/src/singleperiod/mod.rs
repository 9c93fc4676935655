//! Single-period mean–cVaR portfolio selection with norm-ball robustness
//! around every weighted sample of returns.
//!
//! The loss of portfolio `x` under returns `ζ` is evaluated through the
//! cVaR auxiliary variable `β` as the maximum of two affine pieces,
//! `β − λ x·ζ` and `(1 − 1/α) β − (1/α + λ) x·ζ`, whose expectation over
//! `ζ`, minimized over `β`, equals `cVaR_α(−x·ζ) − λ E[x·ζ]`. Returns may be
//! negative, so the uncertainty sets are full norm balls.

use crate::error::{Error, Result};
use crate::lp::{solve, Backend, LpModel, LpStatus, Sense};
use crate::norm::Norm;
use crate::weights::{Dataset, WeightVector};
use serde::{Deserialize, Serialize};

/// Asset count, cVaR level `α` and risk–return trade-off `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PortfolioProblem {
    pub n: usize,
    pub alpha: f64,
    pub lambda: f64,
}

impl PortfolioProblem {
    pub fn new(n: usize, alpha: f64, lambda: f64) -> Result<Self> {
        let p = Self { n, alpha, lambda };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("portfolio needs at least one asset".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("lambda must be finite and nonnegative, got {}", self.lambda)));
        }
        Ok(())
    }

    /// Slopes of the two loss pieces in `x·ζ` and in `β`.
    fn pieces(&self) -> [(f64, f64); 2] {
        let inv = 1.0 / self.alpha;
        [(-self.lambda, 1.0), (-(inv + self.lambda), 1.0 - inv)]
    }

    /// Loss of `(x, β)` under returns `zeta`.
    pub fn scenario_cost(&self, x: &[f64], beta: f64, zeta: &[f64]) -> f64 {
        let r = dot(x, zeta);
        self.pieces().iter().map(|&(a, b)| b * beta + a * r).fold(f64::NEG_INFINITY, f64::max)
    }

    /// `cVaR_α(−x·ζ) − λ E[x·ζ]` under the uniform distribution on
    /// `scenarios`, with `β` chosen optimally.
    pub fn realized_objective(&self, x: &[f64], scenarios: &[Vec<f64>]) -> f64 {
        let m = scenarios.len() as f64;
        let mut loss: Vec<f64> = scenarios.iter().map(|z| -dot(x, z)).collect();
        loss.sort_by(|a, b| b.total_cmp(a));
        let mean_return = -loss.iter().sum::<f64>() / m;
        // β + (1/α) E[(L − β)⁺] is minimized at one of the losses.
        let mut best = f64::INFINITY;
        let mut prefix = 0.0;
        for (k, &beta) in loss.iter().enumerate() {
            let excess = prefix - k as f64 * beta;
            best = best.min(beta + excess / (self.alpha * m));
            prefix += beta;
        }
        best - self.lambda * mean_return
    }
}

/// Optimal portfolio, cVaR variable and optimal value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortfolioSolution {
    pub value: f64,
    pub x: Vec<f64>,
    pub beta: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

fn check(p: &PortfolioProblem, data: &Dataset, w: &WeightVector, eps: f64) -> Result<()> {
    p.validate()?;
    if data.d_xi() != p.n {
        return Err(Error::InvalidParameter(format!("{} return columns for {} assets", data.d_xi(), p.n)));
    }
    if w.len() != data.len() {
        return Err(Error::InvalidParameter(format!("{} weights for {} samples", w.len(), data.len())));
    }
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameter(format!("radius must be finite and nonnegative, got {eps}")));
    }
    Ok(())
}

/// Minimizes the weighted worst-case loss over norm balls of radius `eps`
/// around every sample of returns, over long-only fully invested portfolios
/// and the cVaR variable `β`.
pub fn solve_cvar_portfolio(
    p: &PortfolioProblem,
    data: &Dataset,
    w: &WeightVector,
    eps: f64,
    norm: Norm,
) -> Result<PortfolioSolution> {
    check(p, data, w, eps)?;
    let mut lp = LpModel::new();
    let x: Vec<usize> = (0..p.n).map(|_| lp.add_nonneg(0.0)).collect();
    let beta = lp.add_free(0.0);
    lp.add_row(x.iter().map(|&j| (j, 1.0)).collect(), Sense::Eq, 1.0);
    // Dual norm of x ≥ 0 on the simplex: max_j x_j, or the constant Σ x_j = 1.
    let norm_terms: Vec<(usize, f64)> = match norm.dual() {
        Norm::LInf => {
            let t = lp.add_nonneg(0.0);
            for &j in &x {
                lp.add_row(vec![(j, 1.0), (t, -1.0)], Sense::Le, 0.0);
            }
            vec![(t, 1.0)]
        }
        Norm::L1 => Vec::new(),
        Norm::L2 => return Err(Error::UnsupportedNorm("l2 sets need second-order cones".into())),
    };
    let norm_const = if norm.dual() == Norm::L1 { 1.0 } else { 0.0 };
    for (i, xi) in data.xis.iter().enumerate() {
        if w[i] == 0.0 {
            continue;
        }
        let v = lp.add_free(w[i]);
        for (a, b) in p.pieces() {
            // v ≥ bβ + a x·ξ + ε|a| ‖x‖_*
            let mut row: Vec<(usize, f64)> = vec![(beta, b), (v, -1.0)];
            row.extend(x.iter().zip(xi).map(|(&j, &r)| (j, a * r)));
            row.extend(norm_terms.iter().map(|&(t, c)| (t, eps * a.abs() * c)));
            lp.add_row(row, Sense::Le, -eps * a.abs() * norm_const);
        }
    }
    let res = solve(&lp, Backend::Auto)?;
    if res.status != LpStatus::Optimal {
        return Err(Error::Lp(res.status));
    }
    Ok(PortfolioSolution { value: res.value, x: x.iter().map(|&j| res.point[j]).collect(), beta: res.point[beta] })
}

/// Weighted worst-case loss of a fixed `(x, β)` over norm balls of radius
/// `eps` around every sample of returns.
pub fn dro_value_fixed_decision(
    x: &[f64],
    beta: f64,
    p: &PortfolioProblem,
    data: &Dataset,
    w: &WeightVector,
    eps: f64,
    norm: Norm,
) -> Result<f64> {
    check(p, data, w, eps)?;
    if x.len() != p.n {
        return Err(Error::InvalidParameter(format!("portfolio has {} entries for {} assets", x.len(), p.n)));
    }
    let xn = norm.dual().of(x);
    Ok(data
        .xis
        .iter()
        .enumerate()
        .filter(|(i, _)| w[*i] > 0.0)
        .map(|(i, xi)| {
            let r = dot(x, xi);
            let worst = p
                .pieces()
                .iter()
                .map(|&(a, b)| b * beta + a * r + eps * a.abs() * xn)
                .fold(f64::NEG_INFINITY, f64::max);
            w[i] * worst
        })
        .sum())
}
