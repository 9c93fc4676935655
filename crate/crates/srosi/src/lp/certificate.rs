use super::model::{LpModel, LpResult, LpStatus, Sense};

/// Measured optimality residuals of a primal–dual pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateReport {
    /// Largest row or bound violation of the point.
    pub primal_residual: f64,
    /// Largest sign violation of a row dual or reduced cost.
    pub dual_residual: f64,
    /// `|cᵀx − dual objective|`.
    pub gap: f64,
    pub dual_objective: f64,
}

/// Computes the residuals of `result` against `model`.
///
/// The dual objective is `bᵀy + Σⱼ rⱼ·(lo_j if rⱼ > 0 else hi_j)` with reduced
/// costs `r = c − Aᵀy`; infinite bounds paired with a reduced cost of the
/// wrong sign count as dual infeasibility and contribute nothing.
pub fn certificate_report(model: &LpModel, result: &LpResult) -> CertificateReport {
    let n = model.num_vars();
    let x = &result.point;
    let y = &result.duals;
    let act = model.activities(x);
    let mut primal = 0.0f64;
    for (i, &a) in act.iter().enumerate() {
        let viol = match model.senses[i] {
            Sense::Le => a - model.b[i],
            Sense::Ge => model.b[i] - a,
            Sense::Eq => (a - model.b[i]).abs(),
        };
        primal = primal.max(viol);
    }
    for j in 0..n {
        primal = primal.max(model.lo[j] - x[j]).max(x[j] - model.hi[j]);
    }

    let mut dual = 0.0f64;
    let mut dual_obj = 0.0;
    for (i, &yi) in y.iter().enumerate() {
        let viol = match model.senses[i] {
            Sense::Le => yi,
            Sense::Ge => -yi,
            Sense::Eq => 0.0,
        };
        dual = dual.max(viol);
        dual_obj += model.b[i] * yi;
    }
    let mut r = model.c.clone();
    for (i, row) in model.rows.iter().enumerate() {
        for &(j, v) in row {
            r[j] -= y[i] * v;
        }
    }
    for j in 0..n {
        if r[j] > 0.0 {
            if model.lo[j].is_finite() {
                dual_obj += r[j] * model.lo[j];
            } else {
                dual = dual.max(r[j]);
            }
        } else if r[j] < 0.0 {
            if model.hi[j].is_finite() {
                dual_obj += r[j] * model.hi[j];
            } else {
                dual = dual.max(-r[j]);
            }
        }
    }
    let value = model.objective(x);
    CertificateReport {
        primal_residual: primal,
        dual_residual: dual,
        gap: (value - dual_obj).abs(),
        dual_objective: dual_obj,
    }
}

/// True iff `result` is an optimal primal–dual pair for `model`: primal
/// residual ≤ 1e-7·(1+‖b‖∞), dual sign residual ≤ 1e-7·(1+‖c‖∞) and
/// duality gap ≤ 1e-6·(1+|value|). A zero gap together with feasibility is
/// equivalent to complementary slackness.
pub fn check_certificate(model: &LpModel, result: &LpResult) -> bool {
    if result.status != LpStatus::Optimal
        || result.point.len() != model.num_vars()
        || result.duals.len() != model.num_rows()
    {
        return false;
    }
    let rep = certificate_report(model, result);
    let bnorm = model.b.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let cnorm = model.c.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let value = model.objective(&result.point);
    rep.primal_residual <= 1e-7 * (1.0 + bnorm)
        && rep.dual_residual <= 1e-7 * (1.0 + cnorm)
        && rep.gap <= 1e-6 * (1.0 + value.abs())
        && (value - result.value).abs() <= 1e-6 * (1.0 + value.abs())
}
