use super::dataset::{check_query, sq_dist, Dataset, WeightVector};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Uniform weight `1/k` on the `k` samples whose side information is closest
/// to `query` in the Euclidean norm. Ties at the boundary distance go to the
/// smallest sample index, so exactly `k` samples are selected.
pub fn knn_weights(data: &Dataset, query: &[f64], k: usize) -> Result<WeightVector> {
    check_query(data, query)?;
    let n = data.len();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("k = {k} must lie in 1..={n}")));
    }
    let dist: Vec<f64> = data.gammas.iter().map(|g| sq_dist(g, query)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(a.cmp(&b)));
    let mut w = vec![0.0; n];
    for &i in &order[..k] {
        w[i] = 1.0 / k as f64;
    }
    Ok(WeightVector::new(w).expect("k equal weights of 1/k"))
}

/// Smoothing kernel used by [`kernel_weights`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Gaussian,
    Triangular,
    Epanechnikov,
}

impl KernelKind {
    /// Kernel value `K(u)` at a nonnegative scaled distance `u`.
    pub fn eval(self, u: f64) -> f64 {
        match self {
            KernelKind::Gaussian => (-0.5 * u * u).exp() / (2.0 * std::f64::consts::PI).sqrt(),
            KernelKind::Triangular => {
                if u <= 1.0 {
                    1.0 - u
                } else {
                    0.0
                }
            }
            KernelKind::Epanechnikov => {
                if u <= 1.0 {
                    0.75 * (1.0 - u * u)
                } else {
                    0.0
                }
            }
        }
    }
}

impl std::fmt::Display for KernelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            KernelKind::Gaussian => "gaussian",
            KernelKind::Triangular => "triangular",
            KernelKind::Epanechnikov => "epanechnikov",
        })
    }
}

impl std::str::FromStr for KernelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" => Ok(KernelKind::Gaussian),
            "triangular" => Ok(KernelKind::Triangular),
            "epanechnikov" => Ok(KernelKind::Epanechnikov),
            other => Err(Error::InvalidParameter(format!("unknown kernel {other:?}"))),
        }
    }
}

/// Nadaraya-Watson weights `K(‖γⁱ − γ̄‖/h) / Σⱼ K(‖γʲ − γ̄‖/h)`.
///
/// The Gaussian kernel is evaluated relative to the nearest sample, which
/// leaves the normalized weights unchanged but keeps them representable for
/// very small bandwidths. Compact kernels with no sample inside the bandwidth
/// return [`Error::NoMass`].
pub fn kernel_weights(data: &Dataset, query: &[f64], h: f64, kernel: KernelKind) -> Result<WeightVector> {
    check_query(data, query)?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter(format!("bandwidth h = {h} must be positive")));
    }
    let u: Vec<f64> = data.gammas.iter().map(|g| sq_dist(g, query).sqrt() / h).collect();
    let mass: Vec<f64> = match kernel {
        KernelKind::Gaussian => {
            let u2_min = u.iter().map(|v| v * v).fold(f64::INFINITY, f64::min);
            u.iter().map(|v| (-0.5 * (v * v - u2_min)).exp()).collect()
        }
        _ => u.iter().map(|&v| kernel.eval(v)).collect(),
    };
    WeightVector::from_unnormalized(mass)
}
