//! Multi-stage problems with side information: the weighted sample-robust
//! program over linear decision rules with one auxiliary recourse rule per
//! sample, compiled to a linear program, and exact evaluation of policies.

mod build;
mod evaluate;
mod instances;
mod problem;

pub use build::{
    build_multipolicy_lp, solve_sro, solve_sro_with, LpLayout, MultiPolicy, PrimaryPolicy, RecourseColumns,
    RecoursePolicy, SetEncoding, SroLp, SroOptions, SroSolution,
};
pub use evaluate::{evaluate_policy, exact_sro_objective, MAX_EXACT_DIM};
pub use instances::{inventory_problem, newsvendor_problem, shipment_problem, InventoryParams, ShipmentParams};
pub use problem::{DynamicProblem, Support, UncertaintySpec, PROBLEM_SCHEMA_VERSION};
