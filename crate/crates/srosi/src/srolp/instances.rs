use super::problem::{DynamicProblem, PROBLEM_SCHEMA_VERSION};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Periodic-review inventory with several suppliers and backlogging.
///
/// In each period the manager orders from every supplier before that
/// period's demand is revealed; an order from supplier `j` placed in period
/// `s` arrives at the start of period `s + lead_times[j]`. The period cost is
/// the ordering cost plus `holding` per unit of positive end-of-period stock
/// or `backorder` per unit of backlog, modeled with one epigraph variable and
/// two rows per period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InventoryParams {
    pub periods: usize,
    pub order_costs: Vec<f64>,
    pub lead_times: Vec<usize>,
    pub holding: f64,
    pub backorder: f64,
}

impl InventoryParams {
    /// Two suppliers costing 1.0 and 0.5 per unit with lead times 0 and 1,
    /// holding cost 0.25 and backorder cost 11 over twelve periods.
    pub fn two_supplier() -> Self {
        Self { periods: 12, order_costs: vec![1.0, 0.5], lead_times: vec![0, 1], holding: 0.25, backorder: 11.0 }
    }
}

/// Builds the inventory cost as a [`DynamicProblem`] with nonnegative orders.
pub fn inventory_problem(p: &InventoryParams) -> Result<DynamicProblem> {
    let (t_max, nsup) = (p.periods, p.order_costs.len());
    if t_max == 0 || nsup == 0 || p.lead_times.len() != nsup {
        return Err(Error::InvalidParameter("inventory needs periods, and one lead time per supplier".into()));
    }
    let dx = t_max * nsup;
    let m = 2 * t_max;
    let mut a = vec![vec![0.0; dx]; m];
    let mut b = vec![vec![0.0; t_max]; m];
    let mut c = vec![vec![0.0; t_max]; m];
    for t in 0..t_max {
        // Net stock at the end of period t, as coefficients on orders and demands.
        let mut stock_x = vec![0.0; dx];
        for s in 0..=t {
            for j in 0..nsup {
                if s + p.lead_times[j] <= t {
                    stock_x[s * nsup + j] = 1.0;
                }
            }
        }
        for (row, scale) in [(2 * t, p.holding), (2 * t + 1, -p.backorder)] {
            for (col, v) in stock_x.iter().enumerate() {
                a[row][col] = scale * v;
            }
            for s in 0..=t {
                b[row][s] = -scale;
            }
            c[row][t] = -1.0;
        }
    }
    let prob = DynamicProblem {
        version: PROBLEM_SCHEMA_VERSION,
        x_dims: vec![nsup; t_max],
        xi_dims: vec![1; t_max],
        y_dims: vec![1; t_max],
        row_dims: vec![2; t_max],
        f: (0..t_max).flat_map(|_| p.order_costs.iter().copied()).collect(),
        g: vec![0.0; t_max],
        h: vec![1.0; t_max],
        a,
        b,
        c,
        d: vec![0.0; m],
        x_nonneg: true,
    };
    prob.validate()?;
    Ok(prob)
}

/// Single-period newsvendor with unit overage cost `h` and underage cost `b`.
pub fn newsvendor_problem(h: f64, b: f64) -> Result<DynamicProblem> {
    inventory_problem(&InventoryParams {
        periods: 1,
        order_costs: vec![0.0],
        lead_times: vec![0],
        holding: h,
        backorder: b,
    })
}

/// Capacity planning at facilities serving demand locations.
///
/// Facility capacities `x_f` are produced at `production_cost` before demand
/// is known. Once demand is revealed, extra capacity `y_f` costs
/// `emergency_cost` and shipping one unit from `f` to `ℓ` costs
/// `shipping[f][ℓ]`. Every unit of demand earns `revenue`, which enters the
/// cost as the policy-independent term `−revenue·Σ ξ_ℓ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShipmentParams {
    pub production_cost: f64,
    pub emergency_cost: f64,
    pub revenue: f64,
    pub shipping: Vec<Vec<f64>>,
}

/// Builds the shipment cost as a one-stage [`DynamicProblem`] whose recourse
/// is `y_f` followed by `s_{fℓ}` in row-major order.
pub fn shipment_problem(p: &ShipmentParams) -> Result<DynamicProblem> {
    let nf = p.shipping.len();
    let nl = p.shipping.first().map_or(0, Vec::len);
    if nf == 0 || nl == 0 || p.shipping.iter().any(|r| r.len() != nl) {
        return Err(Error::InvalidParameter("shipping costs must form a nonempty matrix".into()));
    }
    let dy = nf + nf * nl;
    let s_idx = |f: usize, l: usize| nf + f * nl + l;
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut c = Vec::new();
    let mut push = |ar: Vec<f64>, br: Vec<f64>, cr: Vec<f64>| {
        a.push(ar);
        b.push(br);
        c.push(cr);
    };
    for l in 0..nl {
        let mut br = vec![0.0; nl];
        br[l] = 1.0;
        let mut cr = vec![0.0; dy];
        for f in 0..nf {
            cr[s_idx(f, l)] = -1.0;
        }
        push(vec![0.0; nf], br, cr);
    }
    for f in 0..nf {
        let mut ar = vec![0.0; nf];
        ar[f] = -1.0;
        let mut cr = vec![0.0; dy];
        cr[f] = -1.0;
        for l in 0..nl {
            cr[s_idx(f, l)] = 1.0;
        }
        push(ar, vec![0.0; nl], cr);
    }
    for j in 0..dy {
        let mut cr = vec![0.0; dy];
        cr[j] = -1.0;
        push(vec![0.0; nf], vec![0.0; nl], cr);
    }
    let m = a.len();
    let mut h = vec![p.emergency_cost; nf];
    h.extend(p.shipping.iter().flatten().copied());
    let prob = DynamicProblem {
        version: PROBLEM_SCHEMA_VERSION,
        x_dims: vec![nf],
        xi_dims: vec![nl],
        y_dims: vec![dy],
        row_dims: vec![m],
        f: vec![p.production_cost; nf],
        g: vec![-p.revenue; nl],
        h,
        a,
        b,
        c,
        d: vec![0.0; m],
        x_nonneg: true,
    };
    prob.validate()?;
    Ok(prob)
}
