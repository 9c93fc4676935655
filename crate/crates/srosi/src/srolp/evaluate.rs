use super::build::{dot, PrimaryPolicy};
use super::problem::{DynamicProblem, Support, UncertaintySpec};
use crate::error::{Error, Result};
use crate::lp::{solve_lp, LpModel, LpStatus, Sense, SolveOptions};
use crate::norm::Norm;
use crate::weights::{Dataset, WeightVector};

/// Largest `d_ξ` accepted by [`exact_sro_objective`].
pub const MAX_EXACT_DIM: usize = 16;

/// `min { h y : c_r y ≤ q_r }` for a scalar `y`.
fn scalar_recourse(h: f64, coef: &[f64], rhs: &[f64], stage: usize) -> Result<f64> {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for (&c, &q) in coef.iter().zip(rhs) {
        if c > 0.0 {
            hi = hi.min(q / c);
        } else if c < 0.0 {
            lo = lo.max(q / c);
        } else if q < -1e-9 * (1.0 + q.abs()) {
            return Err(Error::InnerInfeasible { stage });
        }
    }
    if lo > hi + 1e-9 * (1.0 + lo.abs().max(hi.abs())) {
        return Err(Error::InnerInfeasible { stage });
    }
    let y = if h > 0.0 {
        lo
    } else if h < 0.0 {
        hi
    } else {
        return Ok(0.0);
    };
    if y.is_infinite() {
        return Err(Error::InnerUnbounded { stage });
    }
    Ok(h * y)
}

/// Realized cost of a primary policy under scenario `zeta`, with the
/// recourse of every stage chosen optimally by an exact LP.
pub fn evaluate_policy(prob: &DynamicProblem, policy: &PrimaryPolicy, zeta: &[f64]) -> Result<f64> {
    if zeta.len() != prob.d_xi() || policy.x0.len() != prob.d_x() || policy.x.len() != prob.d_x() {
        return Err(Error::InvalidParameter("policy or scenario dimension does not match the problem".into()));
    }
    let x = policy.decision(zeta);
    let mut cost = dot(&prob.f, &x) + dot(&prob.g, zeta);
    let mut row0 = 0;
    let mut y0 = 0;
    for t in 0..prob.num_stages() {
        let (nr, ny) = (prob.row_dims[t], prob.y_dims[t]);
        let rows = row0..row0 + nr;
        let ys = y0..y0 + ny;
        let rhs: Vec<f64> = rows.clone().map(|r| prob.d[r] - dot(&prob.a[r], &x) - dot(&prob.b[r], zeta)).collect();
        let h = &prob.h[ys.clone()];
        if ny == 0 {
            if rhs.iter().any(|&q| q < -1e-9 * (1.0 + q.abs())) {
                return Err(Error::InnerInfeasible { stage: t });
            }
        } else if ny == 1 {
            let coef: Vec<f64> = rows.clone().map(|r| prob.c[r][y0]).collect();
            cost += scalar_recourse(h[0], &coef, &rhs, t)?;
        } else {
            let mut lp = LpModel::new();
            for &hj in h {
                lp.add_free(hj);
            }
            for (k, r) in rows.clone().enumerate() {
                let terms = ys.clone().enumerate().map(|(jj, j)| (jj, prob.c[r][j])).collect();
                lp.add_row(terms, Sense::Le, rhs[k]);
            }
            let res = solve_lp(&lp, &SolveOptions::default())?;
            match res.status {
                LpStatus::Optimal => cost += res.value,
                LpStatus::Infeasible => return Err(Error::InnerInfeasible { stage: t }),
                LpStatus::Unbounded => return Err(Error::InnerUnbounded { stage: t }),
                s => return Err(Error::Lp(s)),
            }
        }
        row0 += nr;
        y0 += ny;
    }
    Ok(cost)
}

/// Weighted worst-case realized cost of a primary policy over box-shaped
/// uncertainty sets, by enumerating the vertices of every box (clipped at
/// zero under orthant support). Exact because the realized cost is convex in
/// the scenario.
pub fn exact_sro_objective(
    prob: &DynamicProblem,
    policy: &PrimaryPolicy,
    data: &Dataset,
    w: &WeightVector,
    u: &UncertaintySpec,
) -> Result<f64> {
    if u.norm != Norm::LInf {
        return Err(Error::UnsupportedNorm(format!("vertex enumeration needs linf sets, got {}", u.norm)));
    }
    let dxi = prob.d_xi();
    if dxi > MAX_EXACT_DIM {
        return Err(Error::TooLarge(format!("{dxi} uncertain coordinates exceed {MAX_EXACT_DIM}")));
    }
    if w.len() != data.len() {
        return Err(Error::InvalidParameter(format!("{} weights for {} samples", w.len(), data.len())));
    }
    u.validate()?;
    let mut total = 0.0;
    for (i, xi) in data.xis.iter().enumerate() {
        if w[i] == 0.0 {
            continue;
        }
        let lo: Vec<f64> = xi
            .iter()
            .map(|&v| if u.support == Support::NonnegOrthant { (v - u.eps).max(0.0) } else { v - u.eps })
            .collect();
        let hi: Vec<f64> = xi.iter().map(|&v| v + u.eps).collect();
        let free: Vec<usize> = (0..dxi).filter(|&k| lo[k] < hi[k]).collect();
        let mut worst = f64::NEG_INFINITY;
        let mut zeta = lo.clone();
        for mask in 0u32..(1u32 << free.len()) {
            for (bit, &k) in free.iter().enumerate() {
                zeta[k] = if mask >> bit & 1 == 1 { hi[k] } else { lo[k] };
            }
            worst = worst.max(evaluate_policy(prob, policy, &zeta)?);
        }
        total += w[i] * worst;
    }
    Ok(total)
}
