//! Sample robust optimization with side information.
//!
//! The crate is organized by capability:
//!
//! - [`weights`]: k-nearest-neighbor, kernel, CART and random-forest sample
//!   weights, plus the asymptotic parameter schedules.
//! - [`transport`]: discrete measures, exact Wasserstein-1 distances and
//!   worst-case expectations over Wasserstein balls on finite supports.
//! - [`lp`]: the linear-programming backends.
//! - [`srolp`]: multi-stage problems, the multi-policy linear-decision-rule
//!   program, exact policy evaluation and brute-force oracles.
//! - [`singleperiod`]: the mean–cVaR portfolio with robust sample balls.
//! - [`harness`]: data generators, experiment drivers and CSV output.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod harness;
pub mod lp;
mod norm;
pub mod singleperiod;
pub mod srolp;
pub mod transport;
pub mod weights;

pub use error::{Error, Result};
pub use norm::Norm;
