//! Large-model backend: the homogeneous interior-point method of the
//! `clarabel` crate, mapped onto [`LpModel`] / [`LpResult`] conventions.

use super::certificate::check_certificate;
use super::model::{LpModel, LpResult, LpStatus, Sense};
use crate::error::Result;
use clarabel::algebra::CscMatrix;
use clarabel::solver::{DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT};
use serde::{Deserialize, Serialize};

/// Tolerances for [`solve_lp_interior`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteriorOptions {
    pub tol: f64,
    pub max_iters: u32,
}

impl Default for InteriorOptions {
    fn default() -> Self {
        Self { tol: 1e-9, max_iters: 400 }
    }
}

/// A cone row: terms, right-hand side, original row index and sign.
type ConeRow = (Vec<(usize, f64)>, f64, usize, f64);

fn csc(m: usize, n: usize, mut trip: Vec<(usize, usize, f64)>) -> CscMatrix<f64> {
    trip.sort_by_key(|&(i, j, _)| (j, i));
    let mut colptr = vec![0usize; n + 1];
    for &(_, j, _) in &trip {
        colptr[j + 1] += 1;
    }
    for j in 0..n {
        colptr[j + 1] += colptr[j];
    }
    let rowval = trip.iter().map(|t| t.0).collect();
    let nzval = trip.iter().map(|t| t.2).collect();
    CscMatrix::new(m, n, colptr, rowval, nzval)
}

/// Solves `model` with an interior-point method. Row duals follow the same
/// sign convention as the simplex backend. The returned point is an
/// approximate (non-vertex) optimum at the configured tolerance.
pub fn solve_lp_interior(model: &LpModel, opts: &InteriorOptions) -> Result<LpResult> {
    model.validate()?;
    let n = model.num_vars();
    // Cone rows: equalities first (zero cone), then `≤` rows (nonnegative cone).
    let mut eq_rows: Vec<ConeRow> = Vec::new();
    let mut le_rows: Vec<ConeRow> = Vec::new();
    for (i, row) in model.rows.iter().enumerate() {
        match model.senses[i] {
            Sense::Eq => eq_rows.push((row.clone(), model.b[i], i, 1.0)),
            Sense::Le => le_rows.push((row.clone(), model.b[i], i, 1.0)),
            Sense::Ge => le_rows.push((row.iter().map(|&(j, v)| (j, -v)).collect(), -model.b[i], i, -1.0)),
        }
    }
    let mut bound_eq = Vec::new();
    let mut bound_le = Vec::new();
    for j in 0..n {
        let (lo, hi) = (model.lo[j], model.hi[j]);
        if lo == hi {
            bound_eq.push((vec![(j, 1.0)], lo));
            continue;
        }
        if lo.is_finite() {
            bound_le.push((vec![(j, -1.0)], -lo));
        }
        if hi.is_finite() {
            bound_le.push((vec![(j, 1.0)], hi));
        }
    }
    let mut trip = Vec::new();
    let mut rhs = Vec::new();
    let mut origin: Vec<Option<(usize, f64)>> = Vec::new();
    for (row, b, i, s) in &eq_rows {
        trip.extend(row.iter().map(|&(j, v)| (rhs.len(), j, v)));
        rhs.push(*b);
        origin.push(Some((*i, *s)));
    }
    for (row, b) in &bound_eq {
        trip.extend(row.iter().map(|&(j, v)| (rhs.len(), j, v)));
        rhs.push(*b);
        origin.push(None);
    }
    let n_zero = rhs.len();
    for (row, b, i, s) in &le_rows {
        trip.extend(row.iter().map(|&(j, v)| (rhs.len(), j, v)));
        rhs.push(*b);
        origin.push(Some((*i, *s)));
    }
    for (row, b) in &bound_le {
        trip.extend(row.iter().map(|&(j, v)| (rhs.len(), j, v)));
        rhs.push(*b);
        origin.push(None);
    }
    let mtot = rhs.len();
    let a = csc(mtot, n, trip);
    let p = CscMatrix::<f64>::zeros((n, n));
    let mut cones = Vec::new();
    if n_zero > 0 {
        cones.push(SupportedConeT::ZeroConeT(n_zero));
    }
    if mtot > n_zero {
        cones.push(SupportedConeT::NonnegativeConeT(mtot - n_zero));
    }
    let settings = DefaultSettingsBuilder::default()
        .verbose(false)
        .max_iter(opts.max_iters)
        .tol_gap_abs(opts.tol)
        .tol_gap_rel(opts.tol)
        .tol_feas(opts.tol)
        .tol_ktratio(1e-7)
        .build()
        .expect("static interior-point settings are valid");
    let mut solver = match DefaultSolver::new(&p, &model.c, &a, &rhs, &cones, settings) {
        Ok(s) => s,
        Err(e) => return Err(crate::error::Error::InvalidModel(e.to_string())),
    };
    solver.solve();
    let sol = &solver.solution;
    let iterations = sol.iterations as usize;
    let status = match sol.status {
        SolverStatus::Solved | SolverStatus::AlmostSolved => LpStatus::Optimal,
        SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible => LpStatus::Infeasible,
        SolverStatus::DualInfeasible | SolverStatus::AlmostDualInfeasible => LpStatus::Unbounded,
        _ => LpStatus::IterLimit,
    };
    if status != LpStatus::Optimal {
        return Ok(LpResult::failed(status, iterations));
    }
    let point = sol.x.clone();
    let mut duals = vec![0.0; model.num_rows()];
    for (k, o) in origin.iter().enumerate() {
        if let Some((i, s)) = o {
            duals[*i] = -s * sol.z[k];
        }
    }
    let result = LpResult { status, value: model.objective(&point), point, duals, iterations };
    if sol.status == SolverStatus::AlmostSolved && !check_certificate(model, &result) {
        return Ok(LpResult::failed(LpStatus::IterLimit, iterations));
    }
    Ok(result)
}
