//! Finite-support probability measures, exact Wasserstein-1 distances and
//! worst-case expectations over Wasserstein balls with a fixed finite support.

use crate::error::{Error, Result};
use crate::lp::{solve, Backend, LpModel, LpStatus, Sense};
use crate::norm::Norm;
use crate::weights::{Dataset, WeightVector};
use serde::{Deserialize, Serialize};

/// Probability measure with finitely many atoms in `ℝᵈ`. Zero-probability
/// atoms are kept so indices line up with the dataset they came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    pub atoms: Vec<Vec<f64>>,
    pub probs: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<Vec<f64>>, probs: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() || atoms.len() != probs.len() {
            return Err(Error::InvalidParameter(
                "a measure needs one probability per atom and at least one atom".into(),
            ));
        }
        let d = atoms[0].len();
        if atoms.iter().any(|a| a.len() != d || a.iter().any(|v| !v.is_finite())) {
            return Err(Error::InvalidParameter("atoms must be finite and share one dimension".into()));
        }
        if probs.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidParameter("probabilities must be finite and nonnegative".into()));
        }
        let s: f64 = probs.iter().sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!("probabilities sum to {s}, not 1")));
        }
        Ok(Self { atoms, probs })
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].len()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Expectation of a function given by its values at the atoms.
    pub fn expect(&self, values: &[f64]) -> f64 {
        self.probs.iter().zip(values).map(|(p, v)| p * v).sum()
    }
}

/// The weighted empirical measure `Σᵢ wⁱ δ_{ξⁱ}`.
pub fn empirical_conditional(data: &Dataset, w: &WeightVector) -> Result<DiscreteMeasure> {
    if w.len() != data.len() {
        return Err(Error::InvalidParameter(format!("{} weights for {} samples", w.len(), data.len())));
    }
    DiscreteMeasure::new(data.xis.clone(), w.as_slice().to_vec())
}

/// Optimal transportation plan with the dual potentials that certify it.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    pub distance: f64,
    /// `coupling[j][k]` is the mass moved from atom `j` of the source to atom
    /// `k` of the target.
    pub coupling: Vec<Vec<f64>>,
    /// Potentials `u` (source) and `v` (target) with `u_j + v_k ≤ c_jk`.
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    /// Dual objective `Σ μ_j u_j + Σ ν_k v_k`.
    pub dual_value: f64,
}

impl TransportPlan {
    /// Largest violation of `u_j + v_k ≤ c_jk`.
    pub fn dual_violation(&self, cost: &[Vec<f64>]) -> f64 {
        let mut worst: f64 = 0.0;
        for (j, row) in cost.iter().enumerate() {
            for (k, c) in row.iter().enumerate() {
                worst = worst.max(self.u[j] + self.v[k] - c);
            }
        }
        worst
    }
}

/// Pairwise cost matrix `c_jk = ‖a_j − b_k‖`.
pub fn cost_matrix(a: &[Vec<f64>], b: &[Vec<f64>], norm: Norm) -> Vec<Vec<f64>> {
    a.iter().map(|x| b.iter().map(|y| norm.dist(x, y)).collect()).collect()
}

fn check_same_dim(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<()> {
    if mu.dim() != nu.dim() {
        return Err(Error::InvalidParameter(format!("dimensions {} and {} differ", mu.dim(), nu.dim())));
    }
    Ok(())
}

/// Wasserstein-1 distance with the optimal coupling and dual potentials.
pub fn transport_plan(mu: &DiscreteMeasure, nu: &DiscreteMeasure, norm: Norm) -> Result<TransportPlan> {
    check_same_dim(mu, nu)?;
    let cost = cost_matrix(&mu.atoms, &nu.atoms, norm);
    let (m, n) = (mu.len(), nu.len());
    let mut lp = LpModel::new();
    for row in &cost {
        for &c in row {
            lp.add_nonneg(c);
        }
    }
    for j in 0..m {
        lp.add_row((0..n).map(|k| (j * n + k, 1.0)).collect(), Sense::Eq, mu.probs[j]);
    }
    for k in 0..n {
        lp.add_row((0..m).map(|j| (j * n + k, 1.0)).collect(), Sense::Eq, nu.probs[k]);
    }
    let res = solve(&lp, Backend::Auto)?;
    if res.status != LpStatus::Optimal {
        return Err(Error::Lp(res.status));
    }
    let coupling = (0..m).map(|j| res.point[j * n..(j + 1) * n].to_vec()).collect();
    let u = res.duals[..m].to_vec();
    let v = res.duals[m..].to_vec();
    let dual_value = mu.expect(&u) + nu.expect(&v);
    Ok(TransportPlan { distance: res.value.max(0.0), coupling, u, v, dual_value })
}

/// Wasserstein-1 distance between two finite-support measures, the optimal
/// value of the transportation LP with cost `‖atom_j − atom'_k‖`.
pub fn wasserstein1(mu: &DiscreteMeasure, nu: &DiscreteMeasure, norm: Norm) -> Result<f64> {
    Ok(transport_plan(mu, nu, norm)?.distance)
}

/// Exact Wasserstein-1 distance between a measure on the line and the
/// uniform distribution on `[a, b]`, as `∫|F_μ(t) − F_U(t)| dt` evaluated
/// piece by piece.
pub fn wasserstein1_1d_vs_uniform(mu: &DiscreteMeasure, a: f64, b: f64) -> Result<f64> {
    if mu.dim() != 1 {
        return Err(Error::InvalidParameter("measure must be one-dimensional".into()));
    }
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParameter(format!("need a < b, got [{a}, {b}]")));
    }
    let mut pts: Vec<(f64, f64)> = mu.atoms.iter().map(|x| x[0]).zip(mu.probs.iter().copied()).collect();
    pts.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut breaks: Vec<f64> = pts.iter().map(|p| p.0).chain([a, b]).collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let uniform_cdf = |t: f64| ((t - a) / (b - a)).clamp(0.0, 1.0);
    let mut total = 0.0;
    let mut mass = 0.0;
    let mut next_atom = 0;
    for win in breaks.windows(2) {
        let (l, r) = (win[0], win[1]);
        while next_atom < pts.len() && pts[next_atom].0 <= l {
            mass += pts[next_atom].1;
            next_atom += 1;
        }
        let (gl, gr) = (uniform_cdf(l), uniform_cdf(r));
        let (dl, dr) = (mass - gl, mass - gr);
        total += if dl * dr >= 0.0 {
            (r - l) * 0.5 * (dl + dr).abs()
        } else {
            // The uniform CDF crosses the step inside the interval.
            let s = dl / (dl - dr);
            (r - l) * 0.5 * (s * dl.abs() + (1.0 - s) * dr.abs())
        };
    }
    Ok(total)
}

/// Largest expectation of `f` over measures supported on `support` whose
/// Wasserstein-1 distance to `center` is at most `theta`, solved as one LP in
/// the coupling between the center atoms and the support points.
///
/// Every center atom with positive mass must coincide with a support point.
pub fn w1_dro_sup_finite(
    center: &DiscreteMeasure,
    support: &[Vec<f64>],
    f: &[f64],
    theta: f64,
    norm: Norm,
) -> Result<f64> {
    if support.is_empty() || support.len() != f.len() {
        return Err(Error::InvalidParameter("support and values must be nonempty and of equal length".into()));
    }
    if support.iter().any(|s| s.len() != center.dim()) {
        return Err(Error::InvalidParameter("support points must match the center dimension".into()));
    }
    if !(theta >= 0.0) || !theta.is_finite() {
        return Err(Error::InvalidParameter(format!("radius {theta} must be finite and nonnegative")));
    }
    let cost = cost_matrix(&center.atoms, support, norm);
    for (j, row) in cost.iter().enumerate() {
        if center.probs[j] > 0.0 && !row.iter().any(|&c| c <= 1e-12) {
            return Err(Error::InvalidParameter(format!("center atom {j} is not a support point")));
        }
    }
    let n = support.len();
    let mut lp = LpModel::new();
    let mut budget = Vec::new();
    for (j, row) in cost.iter().enumerate() {
        let first = lp.num_vars();
        for k in 0..n {
            let var = lp.add_nonneg(-f[k]);
            budget.push((var, row[k]));
        }
        lp.add_row((first..first + n).map(|v| (v, 1.0)).collect(), Sense::Eq, center.probs[j]);
    }
    lp.add_row(budget, Sense::Le, theta);
    let res = solve(&lp, Backend::Auto)?;
    if res.status != LpStatus::Optimal {
        return Err(Error::Lp(res.status));
    }
    Ok(-res.value)
}
