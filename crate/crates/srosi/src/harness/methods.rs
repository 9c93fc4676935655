//! The method taxonomy of the experiments: uniform or learned sample
//! weights, crossed with a zero or positive uncertainty radius.

use crate::error::{Error, Result};
use crate::weights::{
    cart_weights, fit_cart, fit_forest, kernel_weights, knn_weights, rf_weights, Dataset, ForestModel, ForestParams,
    KernelKind, TreeModel, WeightVector,
};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Family of learned weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    Knn,
    Kernel,
    Cart,
    Rf,
}

impl WeightKind {
    pub const ALL: [WeightKind; 4] = [WeightKind::Knn, WeightKind::Kernel, WeightKind::Cart, WeightKind::Rf];

    pub fn name(self) -> &'static str {
        match self {
            WeightKind::Knn => "knn",
            WeightKind::Kernel => "kernel",
            WeightKind::Cart => "cart",
            WeightKind::Rf => "rf",
        }
    }
}

impl FromStr for WeightKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        WeightKind::ALL
            .into_iter()
            .find(|k| k.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Parse(format!("unknown weight method {s:?}")))
    }
}

/// A method of the experiments.
///
/// | weights \ radius | zero  | positive |
/// |------------------|-------|----------|
/// | uniform          | `SAA` | `SRO`    |
/// | learned          | `PtP-*` | `SROSI-*` |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Saa,
    Sro,
    PtP(WeightKind),
    Srosi(WeightKind),
}

impl Method {
    /// Weight family, `None` for uniform weights.
    pub fn weights(self) -> Option<WeightKind> {
        match self {
            Method::Saa | Method::Sro => None,
            Method::PtP(k) | Method::Srosi(k) => Some(k),
        }
    }

    pub fn robust(self) -> bool {
        matches!(self, Method::Sro | Method::Srosi(_))
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Saa => write!(f, "SAA"),
            Method::Sro => write!(f, "SRO"),
            Method::PtP(k) => write!(f, "PtP-{}", k.name()),
            Method::Srosi(k) => write!(f, "SROSI-{}", k.name()),
        }
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "SAA" => Ok(Method::Saa),
            "SRO" => Ok(Method::Sro),
            _ => {
                if let Some(k) = s.strip_prefix("PtP-") {
                    Ok(Method::PtP(k.parse()?))
                } else if let Some(k) = s.strip_prefix("SROSI-") {
                    Ok(Method::Srosi(k.parse()?))
                } else {
                    Err(Error::Parse(format!("unknown method {s:?}")))
                }
            }
        }
    }
}

impl Serialize for Method {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Method {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Neighbor count of kNN weights: fixed, or `⌈scale·N^power⌉` for `N`
/// training samples. Either is capped at `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KnnRule {
    Fixed(usize),
    Power { scale: f64, power: f64 },
}

impl KnnRule {
    pub fn k(&self, n: usize) -> usize {
        let k = match *self {
            KnnRule::Fixed(k) => k,
            KnnRule::Power { scale, power } => (scale * (n as f64).powf(power)).ceil() as usize,
        };
        k.clamp(1, n)
    }
}

/// One concrete weight configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum WeightSpec {
    Uniform,
    Knn { k: KnnRule },
    Kernel { kernel: KernelKind, h: f64 },
    Cart { min_leaf: usize, max_depth: usize },
    Rf { params: ForestParams, seed: u64 },
}

impl WeightSpec {
    /// Short `key=value` description used in result files.
    pub fn describe(&self, n: usize) -> String {
        match self {
            WeightSpec::Uniform => String::new(),
            WeightSpec::Knn { k } => format!("k={}", k.k(n)),
            WeightSpec::Kernel { kernel, h } => format!("kernel={kernel};h={h}"),
            WeightSpec::Cart { min_leaf, max_depth } => format!("min_leaf={min_leaf};max_depth={max_depth}"),
            WeightSpec::Rf { params, .. } => format!(
                "trees={};min_leaf={};max_depth={};mtry={}",
                params.n_trees, params.min_leaf, params.max_depth, params.mtry
            ),
        }
    }

    /// Fits whatever the weights need from the training data.
    pub fn fit(&self, data: &Dataset) -> Result<WeightModel> {
        Ok(match self {
            WeightSpec::Uniform => WeightModel::Uniform(data.len()),
            WeightSpec::Knn { k } => WeightModel::Knn(data.clone(), k.k(data.len())),
            WeightSpec::Kernel { kernel, h } => WeightModel::Kernel(data.clone(), *kernel, *h),
            WeightSpec::Cart { min_leaf, max_depth } => WeightModel::Cart(fit_cart(data, *min_leaf, *max_depth)?),
            WeightSpec::Rf { params, seed } => WeightModel::Rf(fit_forest(data, *params, *seed)?),
        })
    }
}

/// Weights ready to be evaluated at query points.
#[derive(Debug, Clone)]
pub enum WeightModel {
    Uniform(usize),
    Knn(Dataset, usize),
    Kernel(Dataset, KernelKind, f64),
    Cart(TreeModel),
    Rf(ForestModel),
}

impl WeightModel {
    pub fn weights(&self, query: &[f64]) -> Result<WeightVector> {
        match self {
            WeightModel::Uniform(n) => Ok(WeightVector::uniform(*n)),
            WeightModel::Knn(d, k) => knn_weights(d, query, *k),
            WeightModel::Kernel(d, kind, h) => kernel_weights(d, query, *h, *kind),
            WeightModel::Cart(t) => cart_weights(t, query),
            WeightModel::Rf(f) => rf_weights(f, query),
        }
    }

    /// Whether the weights ignore the query.
    pub fn is_uniform(&self) -> bool {
        matches!(self, WeightModel::Uniform(_))
    }
}
