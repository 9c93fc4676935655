//! Synthetic data generators. Every generator draws i.i.d. pairs `(γ, ξ)`
//! from a fixed joint law and is deterministic given its seed.

use crate::error::Result;
use crate::srolp::{inventory_problem, shipment_problem, DynamicProblem, InventoryParams, ShipmentParams};
use crate::weights::Dataset;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Which synthetic law to draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorKind {
    Newsvendor,
    Inventory,
    Portfolio,
    Shipment,
}

/// A generator kind with the seed that fixes its draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub seed: u64,
}

/// Joint law of side information and sample paths.
pub trait Generator {
    fn d_gamma(&self) -> usize;
    fn stage_dims(&self) -> Vec<usize>;
    fn sample_gamma(&self, rng: &mut ChaCha8Rng) -> Vec<f64>;
    /// One draw of the path conditional on side information `gamma`.
    fn sample_xi(&self, gamma: &[f64], rng: &mut ChaCha8Rng) -> Vec<f64>;

    /// `n` i.i.d. pairs.
    fn dataset(&self, n: usize, rng: &mut ChaCha8Rng) -> Dataset {
        let mut gammas = Vec::with_capacity(n);
        let mut xis = Vec::with_capacity(n);
        for _ in 0..n {
            let g = self.sample_gamma(rng);
            xis.push(self.sample_xi(&g, rng));
            gammas.push(g);
        }
        Dataset::new(gammas, xis, self.stage_dims()).expect("generators produce finite, well-shaped data")
    }
}

pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// `γ ~ U[0, 1]` and `ξ = γ + U[0, 1]`, so the conditional law shifts one
/// for one with `γ` and is Lipschitz in the Wasserstein-1 distance.
#[derive(Debug, Clone, Copy, Default)]
pub struct NewsvendorGen;

impl Generator for NewsvendorGen {
    fn d_gamma(&self) -> usize {
        1
    }
    fn stage_dims(&self) -> Vec<usize> {
        vec![1]
    }
    fn sample_gamma(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        vec![rng.random::<f64>()]
    }
    fn sample_xi(&self, gamma: &[f64], rng: &mut ChaCha8Rng) -> Vec<f64> {
        vec![gamma[0] + rng.random::<f64>()]
    }
}

/// Optimal order and optimal expected cost of the unit-cost newsvendor
/// (`h = b = 1`) under the conditional law `U[γ̄, γ̄ + 1]`.
pub fn newsvendor_oracle(gamma: f64) -> (f64, f64) {
    (gamma + 0.5, 0.25)
}

pub fn gen_newsvendor(n: usize, seed: u64) -> Dataset {
    NewsvendorGen.dataset(n, &mut rng_from(seed))
}

/// Seasonal demand driven by three standard normal features:
/// `demand_t = max(0, 100 + 30 sin(2πt/T) + 40 tanh(γ₁ + γ₂ t/T) + 10 z_t)`
/// for `t = 1..T` with i.i.d. standard normal `z_t`. The third feature is
/// pure noise.
#[derive(Debug, Clone, Copy)]
pub struct SeasonalDemandGen {
    pub len: usize,
    /// One stage per coordinate when true, a single stage otherwise.
    pub staged: bool,
}

impl Generator for SeasonalDemandGen {
    fn d_gamma(&self) -> usize {
        3
    }
    fn stage_dims(&self) -> Vec<usize> {
        if self.staged {
            vec![1; self.len]
        } else {
            vec![self.len]
        }
    }
    fn sample_gamma(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        normals(rng, 3)
    }
    fn sample_xi(&self, gamma: &[f64], rng: &mut ChaCha8Rng) -> Vec<f64> {
        let z = normals(rng, self.len);
        seasonal_demand(gamma, &z)
    }
}

/// The seasonal demand path for given features and noise.
pub fn seasonal_demand(gamma: &[f64], z: &[f64]) -> Vec<f64> {
    let len = z.len() as f64;
    z.iter()
        .enumerate()
        .map(|(k, zt)| {
            let t = (k + 1) as f64;
            (100.0 + 30.0 * (2.0 * PI * t / len).sin() + 40.0 * (gamma[0] + gamma[1] * t / len).tanh() + 10.0 * zt)
                .max(0.0)
        })
        .collect()
}

/// Twelve-period seasonal demand with the two-supplier inventory problem.
pub fn gen_inventory(n: usize, seed: u64) -> Result<(Dataset, DynamicProblem)> {
    let gen = SeasonalDemandGen { len: 12, staged: true };
    Ok((gen.dataset(n, &mut rng_from(seed)), inventory_problem(&InventoryParams::two_supplier())?))
}

/// Ten asset returns `ξ = 0.03 tanh(Wγ) + Σ^{1/2} z` with three standard
/// normal features, the fixed loading matrix [`PORTFOLIO_LOADINGS`] and a
/// covariance with standard deviation 0.02 and pairwise correlation 0.2.
#[derive(Debug, Clone, Copy, Default)]
pub struct PortfolioGen;

/// Number of assets drawn by [`PortfolioGen`].
pub const PORTFOLIO_ASSETS: usize = 10;

/// Feature loadings of the portfolio generator (assets × features).
pub const PORTFOLIO_LOADINGS: [[f64; 3]; PORTFOLIO_ASSETS] = [
    [1.0, 0.0, 0.0],
    [0.0, 1.0, 0.0],
    [0.0, 0.0, 1.0],
    [-1.0, 0.5, 0.0],
    [0.5, -1.0, 0.5],
    [0.0, 0.5, -1.0],
    [0.7, 0.7, 0.0],
    [-0.7, 0.0, 0.7],
    [0.3, -0.6, -0.6],
    [-0.5, -0.5, -0.5],
];

const PORTFOLIO_SD: f64 = 0.02;
const PORTFOLIO_RHO: f64 = 0.2;

/// Symmetric square root of the portfolio noise covariance,
/// `σ(a I + b 11ᵀ)` with `a = √(1 − ρ)` and `b = (√(1 − ρ + nρ) − a)/n`.
pub fn portfolio_cov_sqrt() -> Vec<Vec<f64>> {
    let n = PORTFOLIO_ASSETS as f64;
    let a = (1.0 - PORTFOLIO_RHO).sqrt();
    let b = ((1.0 - PORTFOLIO_RHO + n * PORTFOLIO_RHO).sqrt() - a) / n;
    (0..PORTFOLIO_ASSETS)
        .map(|i| (0..PORTFOLIO_ASSETS).map(|j| PORTFOLIO_SD * (b + if i == j { a } else { 0.0 })).collect())
        .collect()
}

/// Conditional mean of the portfolio returns given features.
pub fn portfolio_mean(gamma: &[f64]) -> Vec<f64> {
    PORTFOLIO_LOADINGS.iter().map(|w| 0.03 * (w[0] * gamma[0] + w[1] * gamma[1] + w[2] * gamma[2]).tanh()).collect()
}

impl Generator for PortfolioGen {
    fn d_gamma(&self) -> usize {
        3
    }
    fn stage_dims(&self) -> Vec<usize> {
        vec![PORTFOLIO_ASSETS]
    }
    fn sample_gamma(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        normals(rng, 3)
    }
    fn sample_xi(&self, gamma: &[f64], rng: &mut ChaCha8Rng) -> Vec<f64> {
        let z = normals(rng, PORTFOLIO_ASSETS);
        let root = portfolio_cov_sqrt();
        portfolio_mean(gamma)
            .iter()
            .zip(&root)
            .map(|(m, row)| m + row.iter().zip(&z).map(|(r, v)| r * v).sum::<f64>())
            .collect()
    }
}

pub fn gen_portfolio(n: usize, seed: u64) -> Dataset {
    PortfolioGen.dataset(n, &mut rng_from(seed))
}

/// Facility and location counts of the shipment instance.
pub const SHIPMENT_FACILITIES: usize = 4;
pub const SHIPMENT_LOCATIONS: usize = 12;

/// Shipping cost `1 + 0.3·min(δ, 12 − δ)` with `δ = |3f − ℓ| mod 12` for
/// facility `f` and location `ℓ` counted from zero: facilities sit at every
/// third location on a ring of twelve.
pub fn shipment_costs() -> Vec<Vec<f64>> {
    (0..SHIPMENT_FACILITIES)
        .map(|f| {
            (0..SHIPMENT_LOCATIONS)
                .map(|l| {
                    let delta = (3 * f).abs_diff(l) % 12;
                    1.0 + 0.3 * delta.min(12 - delta) as f64
                })
                .collect()
        })
        .collect()
}

/// Shipment constants: production 5, emergency 100, revenue 90.
pub fn shipment_params() -> ShipmentParams {
    ShipmentParams { production_cost: 5.0, emergency_cost: 100.0, revenue: 90.0, shipping: shipment_costs() }
}

/// Seasonal demand over twelve locations with the shipment problem.
pub fn gen_shipment(n: usize, seed: u64) -> Result<(Dataset, DynamicProblem)> {
    let gen = SeasonalDemandGen { len: SHIPMENT_LOCATIONS, staged: false };
    Ok((gen.dataset(n, &mut rng_from(seed)), shipment_problem(&shipment_params())?))
}
