//! Linear-programming backends.
//!
//! [`solve_lp`] is a bounded-variable two-phase revised simplex with a dense
//! basis inverse; it returns vertex solutions with exact duals and handles
//! every small and medium model in the crate. [`solve_lp_interior`] wraps an
//! interior-point solver for the large multi-policy programs whose dense
//! basis inverse would not fit in memory. [`solve`] picks one by size.

mod certificate;
mod interior;
mod model;
mod mps;
mod simplex;

pub use certificate::{certificate_report, check_certificate, CertificateReport};
pub use interior::{solve_lp_interior, InteriorOptions};
pub use model::{LpModel, LpResult, LpStatus, Sense};
pub use mps::{from_mps, to_mps};
pub use simplex::{solve_lp, SolveOptions};

use crate::error::Result;
use serde::{Deserialize, Serialize};

/// Choice of LP algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Simplex up to [`AUTO_SIMPLEX_MAX_ROWS`] rows, interior point above.
    #[default]
    Auto,
    Simplex,
    Interior,
}

/// Row count above which [`Backend::Auto`] switches to the interior-point
/// backend.
pub const AUTO_SIMPLEX_MAX_ROWS: usize = 600;

/// Solves `model` with the requested backend and default tolerances.
pub fn solve(model: &LpModel, backend: Backend) -> Result<LpResult> {
    solve_with(model, backend, &InteriorOptions::default())
}

/// [`solve`] with explicit interior-point tolerances.
pub fn solve_with(model: &LpModel, backend: Backend, interior: &InteriorOptions) -> Result<LpResult> {
    let simplex = match backend {
        Backend::Simplex => true,
        Backend::Interior => false,
        Backend::Auto => model.num_rows() <= AUTO_SIMPLEX_MAX_ROWS,
    };
    if simplex {
        solve_lp(model, &SolveOptions::default())
    } else {
        solve_lp_interior(model, interior)
    }
}
