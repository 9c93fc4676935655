//! Sample weights from side information: k-nearest neighbors, kernel
//! regression, regression trees and random forests, plus the sample-size
//! schedules for the neighbor count, bandwidth and radius.

mod dataset;
mod local;
mod schedule;
mod tree;

pub use dataset::{Dataset, WeightVector};
pub use local::{kernel_weights, knn_weights, KernelKind};
pub use schedule::{default_schedules, Schedule, ScheduleParams};
pub use tree::{
    cart_weights, fit_cart, fit_forest, rf_weights, ForestModel, ForestParams, Node, TreeModel, DEFAULT_MAX_DEPTH,
    DEFAULT_MIN_LEAF, FOREST_SCHEMA_VERSION,
};
