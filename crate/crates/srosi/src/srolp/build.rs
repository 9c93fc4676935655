use super::problem::{DynamicProblem, Support, UncertaintySpec};
use crate::error::{Error, Result};
use crate::lp::{solve_with, Backend, InteriorOptions, LpModel, LpResult, LpStatus, Sense};
use crate::norm::Norm;
use crate::weights::{Dataset, WeightVector};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Linear decision rule `x(ζ) = x0 + X ζ` for the here-and-now decisions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimaryPolicy {
    pub x0: Vec<f64>,
    /// `d_x × d_ξ` matrix, zero outside the non-anticipativity mask.
    pub x: Vec<Vec<f64>>,
}

impl PrimaryPolicy {
    /// The all-zero policy.
    pub fn zeros(prob: &DynamicProblem) -> Self {
        Self { x0: vec![0.0; prob.d_x()], x: vec![vec![0.0; prob.d_xi()]; prob.d_x()] }
    }

    /// Decisions under scenario `zeta`.
    pub fn decision(&self, zeta: &[f64]) -> Vec<f64> {
        self.x0.iter().zip(&self.x).map(|(c, row)| c + dot(row, zeta)).collect()
    }
}

/// Auxiliary recourse rule `y(ζ) = y0 + Y ζ` attached to one sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoursePolicy {
    pub y0: Vec<f64>,
    /// `d_y × d_ξ` matrix, zero outside the non-anticipativity mask.
    pub y: Vec<Vec<f64>>,
}

impl RecoursePolicy {
    pub fn decision(&self, zeta: &[f64]) -> Vec<f64> {
        self.y0.iter().zip(&self.y).map(|(c, row)| c + dot(row, zeta)).collect()
    }
}

/// Primary rule plus one auxiliary recourse rule per sample. Samples left
/// out of the program (zero weight with pruning on) have no recourse rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiPolicy {
    pub primary: PrimaryPolicy,
    pub recourse: Vec<Option<RecoursePolicy>>,
}

/// Options of [`build_multipolicy_lp`] and [`solve_sro_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SroOptions {
    /// Use one recourse rule for every sample instead of one per sample.
    pub shared_recourse: bool,
    /// Leave zero-weight samples out of the program.
    pub prune_zero_weight: bool,
    pub backend: Backend,
    pub encoding: SetEncoding,
    /// Tolerances used when the interior-point backend runs.
    pub interior: InteriorOptions,
}

impl Default for SroOptions {
    fn default() -> Self {
        Self {
            shared_recourse: false,
            prune_zero_weight: true,
            backend: Backend::Auto,
            encoding: SetEncoding::DualNorm,
            interior: InteriorOptions::default(),
        }
    }
}

/// How robust counterparts over the uncertainty sets are written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetEncoding {
    /// Dual-norm epigraphs with orthant multipliers for every set.
    #[default]
    DualNorm,
    /// For per-sample recourse and ℓ1 sets that lie inside the support,
    /// one copy of each row and of the objective at each of the `2 d_ξ`
    /// vertices `ξⁱ ± ε e_k`, with the recourse rule parametrized by its
    /// value at `ξⁱ` and its slopes scaled by `ε`. Every vertex row touches
    /// a single slope column, which keeps the program sparse. Other sets
    /// fall back to dual-norm epigraphs.
    Vertices,
}

/// Columns of one recourse rule.
#[derive(Debug, Clone, PartialEq)]
pub enum RecourseColumns {
    /// `y(ζ) = y0 + Y ζ` stored directly.
    Direct { y0: Vec<usize>, y: Vec<Vec<Option<usize>>> },
    /// `y(ζ) = center + (slope/ε)(ζ − ξⁱ)`, stored as the value at the
    /// sample path and the slopes multiplied by the radius.
    Centered { center: Vec<usize>, slope: Vec<Vec<Option<usize>>> },
}

/// Column indices of the policy and per-sample quantities in the program.
#[derive(Debug, Clone, PartialEq)]
pub struct LpLayout {
    pub x0: Vec<usize>,
    pub x: Vec<Vec<Option<usize>>>,
    /// Per sample: recourse columns, absent for pruned samples.
    pub recourse: Vec<Option<RecourseColumns>>,
    /// Per sample: epigraph column of the worst-case cost under the vertex encoding.
    pub theta: Vec<Option<usize>>,
    /// Per sample: orthant multipliers of the objective, one slot per coordinate.
    pub s: Vec<Vec<Option<usize>>>,
    /// Per sample: columns and constant whose sum is the dual norm in the objective.
    pub objective_norm: Vec<(Vec<usize>, f64)>,
    pub active: Vec<bool>,
}

/// The multi-policy program together with its objective constant.
#[derive(Debug, Clone)]
pub struct SroLp {
    pub model: LpModel,
    /// Policy-independent part of the objective, `Σᵢ wⁱ g·ξⁱ`.
    pub constant: f64,
    pub layout: LpLayout,
}

/// Result of [`solve_sro`].
#[derive(Debug, Clone)]
pub struct SroSolution {
    /// Optimal weighted worst-case cost, including the constant term.
    pub objective: f64,
    pub policy: MultiPolicy,
    pub lp: LpResult,
    /// Worst-case cost bound of every sample under its own uncertainty set;
    /// zero for pruned samples.
    pub contributions: Vec<f64>,
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

type Terms = Vec<(usize, f64)>;
type EntryKey = Vec<(usize, Vec<(usize, u64)>, u64)>;

struct Builder {
    lp: LpModel,
    dual: Norm,
    cache: HashMap<EntryKey, (Vec<usize>, f64)>,
}

impl Builder {
    /// Columns and constant whose sum bounds the dual norm of the vector
    /// whose entries are the given affine expressions. Entries that are
    /// identically zero are skipped and constant entries need no rows.
    /// Identical vectors share one epigraph.
    fn dual_norm(&mut self, entries: Vec<(Terms, f64)>) -> (Vec<usize>, f64) {
        let mut live: Vec<(usize, Terms, f64)> = Vec::new();
        for (k, (mut terms, c)) in entries.into_iter().enumerate() {
            terms.retain(|t| t.1 != 0.0);
            if terms.is_empty() && c == 0.0 {
                continue;
            }
            terms.sort_by_key(|t| t.0);
            live.push((k, terms, c));
        }
        if live.is_empty() {
            return (Vec::new(), 0.0);
        }
        let key: EntryKey = live
            .iter()
            .map(|(k, t, c)| (*k, t.iter().map(|&(j, v)| (j, v.to_bits())).collect(), c.to_bits()))
            .collect();
        if let Some(hit) = self.cache.get(&key) {
            return hit.clone();
        }
        let out = match self.dual {
            Norm::LInf => {
                let floor = live.iter().filter(|e| e.1.is_empty()).fold(0.0f64, |m, e| m.max(e.2.abs()));
                if live.iter().all(|e| e.1.is_empty()) {
                    (Vec::new(), floor)
                } else {
                    let tau = self.lp.add_var(floor, f64::INFINITY, 0.0);
                    for (_, terms, c) in live.iter().filter(|e| !e.1.is_empty()) {
                        for sign in [1.0, -1.0] {
                            let mut row: Terms = terms.iter().map(|&(j, v)| (j, sign * v)).collect();
                            row.push((tau, -1.0));
                            self.lp.add_row(row, Sense::Le, -sign * c);
                        }
                    }
                    (vec![tau], 0.0)
                }
            }
            Norm::L1 => {
                let mut vars = Vec::new();
                let mut constant = 0.0;
                for (_, terms, c) in &live {
                    if terms.is_empty() {
                        constant += c.abs();
                        continue;
                    }
                    let a = self.lp.add_nonneg(0.0);
                    for sign in [1.0, -1.0] {
                        let mut row: Terms = terms.iter().map(|&(j, v)| (j, sign * v)).collect();
                        row.push((a, -1.0));
                        self.lp.add_row(row, Sense::Le, -sign * c);
                    }
                    vars.push(a);
                }
                (vars, constant)
            }
            Norm::L2 => unreachable!("dual of the supported set norms"),
        };
        self.cache.insert(key, out.clone());
        out
    }
}

fn check_inputs(prob: &DynamicProblem, data: &Dataset, w: &WeightVector, u: &UncertaintySpec) -> Result<()> {
    prob.validate()?;
    u.validate()?;
    if u.norm == Norm::L2 {
        return Err(Error::UnsupportedNorm("l2 uncertainty sets need second-order cones".into()));
    }
    if data.stage_dims != prob.xi_dims {
        return Err(Error::InvalidParameter(format!(
            "dataset stages {:?} do not match problem stages {:?}",
            data.stage_dims, prob.xi_dims
        )));
    }
    if w.len() != data.len() {
        return Err(Error::InvalidParameter(format!("{} weights for {} samples", w.len(), data.len())));
    }
    if u.support == Support::NonnegOrthant && data.xis.iter().flatten().any(|&v| v < 0.0) {
        return Err(Error::InvalidParameter("sample paths must be nonnegative for orthant support".into()));
    }
    Ok(())
}

/// Compiles the weighted sample-robust problem with linear decision rules
/// into one LP: a shared primary rule, a recourse rule per sample and, for
/// every sample, the robust counterparts of the objective and of each row
/// over the sample's uncertainty set.
///
/// Robust counterparts use the dual norm of the set norm. Under orthant
/// support, multipliers of `ζ_k ≥ 0` are created only for coordinates with
/// `ξⁱ_k < ε`; for the others the constraint is implied by the set. With
/// `ε = 0` the sets are single points, no epigraphs are built and the
/// per-sample recourse rules reduce to their intercepts.
pub fn build_multipolicy_lp(
    prob: &DynamicProblem,
    data: &Dataset,
    w: &WeightVector,
    u: &UncertaintySpec,
    opts: &SroOptions,
) -> Result<SroLp> {
    check_inputs(prob, data, w, u)?;
    let (dx, dxi, dy, m) = (prob.d_x(), prob.d_xi(), prob.d_y(), prob.m());
    let eps = u.eps;
    let n = data.len();
    let mut b = Builder { lp: LpModel::new(), dual: u.norm.dual(), cache: HashMap::new() };
    // Orthant support: sign bounds on the rule keep decisions nonnegative.
    // Free support: robust rows `x_j(ζ) ≥ 0` over every set instead.
    let sign_bounds = prob.x_nonneg && u.support == Support::NonnegOrthant;
    let robust_nonneg = prob.x_nonneg && u.support == Support::Free;
    let x_lo = if sign_bounds { 0.0 } else { f64::NEG_INFINITY };
    let x0: Vec<usize> = (0..dx).map(|_| b.lp.add_var(x_lo, f64::INFINITY, 0.0)).collect();
    let x: Vec<Vec<Option<usize>>> = prob
        .x_mask()
        .iter()
        .map(|row| row.iter().map(|&ok| ok.then(|| b.lp.add_var(x_lo, f64::INFINITY, 0.0))).collect())
        .collect();

    let y_mask = prob.y_mask();
    let make_recourse = |b: &mut Builder, with_slopes: bool| {
        let y0: Vec<usize> = (0..dy).map(|_| b.lp.add_free(0.0)).collect();
        let y: Vec<Vec<Option<usize>>> = y_mask
            .iter()
            .map(|row| row.iter().map(|&ok| (ok && with_slopes).then(|| b.lp.add_free(0.0))).collect())
            .collect();
        (y0, y)
    };
    let shared = opts.shared_recourse.then(|| make_recourse(&mut b, true));

    let a_nz: Vec<Vec<(usize, f64)>> =
        prob.a.iter().map(|r| r.iter().copied().enumerate().filter(|t| t.1 != 0.0).collect()).collect();
    let c_nz: Vec<Vec<(usize, f64)>> =
        prob.c.iter().map(|r| r.iter().copied().enumerate().filter(|t| t.1 != 0.0).collect()).collect();

    let mut layout = LpLayout {
        x0: x0.clone(),
        x: x.clone(),
        recourse: vec![None; n],
        s: vec![vec![None; dxi]; n],
        objective_norm: vec![(Vec::new(), 0.0); n],
        theta: vec![None; n],
        active: vec![false; n],
    };
    let mut constant = 0.0;
    for i in 0..n {
        let wi = w[i];
        if opts.prune_zero_weight && wi == 0.0 {
            continue;
        }
        layout.active[i] = true;
        let xi = &data.xis[i];
        let orthant: Vec<bool> = (0..dxi).map(|k| u.support == Support::NonnegOrthant && xi[k] < eps).collect();
        if robust_nonneg {
            for j in 0..dx {
                let mut row: Terms = vec![(x0[j], -1.0)];
                row.extend((0..dxi).filter_map(|k| x[j][k].map(|v| (v, -xi[k]))));
                if eps > 0.0 {
                    let entries = (0..dxi).map(|k| (x[j][k].map(|v| (v, 1.0)).into_iter().collect(), 0.0)).collect();
                    let (vars, _) = b.dual_norm(entries);
                    row.extend(vars.iter().map(|&v| (v, eps)));
                }
                b.lp.add_row(row, Sense::Le, 0.0);
            }
        }
        if opts.encoding == SetEncoding::Vertices
            && u.norm == Norm::L1
            && eps > 0.0
            && shared.is_none()
            && !orthant.iter().any(|&o| o)
        {
            let (theta, cols) = add_vertex_block(&mut b.lp, prob, &x0, &x, &y_mask, &a_nz, &c_nz, xi, eps, wi);
            layout.theta[i] = Some(theta);
            layout.recourse[i] = Some(cols);
            continue;
        }
        let (y0, y) = match &shared {
            Some(s) => s.clone(),
            None => make_recourse(&mut b, eps > 0.0),
        };

        // Objective: f·x(ξ) + g·ξ + h·y(ξ) + s·ξ + ε‖Xᵀf + g + Yᵀh + s‖_*.
        constant += wi * dot(&prob.g, xi);
        for j in 0..dx {
            b.lp.c[x0[j]] += wi * prob.f[j];
            for k in 0..dxi {
                if let Some(v) = x[j][k] {
                    b.lp.c[v] += wi * prob.f[j] * xi[k];
                }
            }
        }
        for j in 0..dy {
            b.lp.c[y0[j]] += wi * prob.h[j];
            for k in 0..dxi {
                if let Some(v) = y[j][k] {
                    b.lp.c[v] += wi * prob.h[j] * xi[k];
                }
            }
        }
        let s: Vec<Option<usize>> = (0..dxi).map(|k| orthant[k].then(|| b.lp.add_nonneg(wi * xi[k]))).collect();
        if eps > 0.0 {
            let entries = (0..dxi)
                .map(|k| {
                    let mut t: Terms = Vec::new();
                    t.extend((0..dx).filter_map(|j| x[j][k].map(|v| (v, prob.f[j]))));
                    t.extend((0..dy).filter_map(|j| y[j][k].map(|v| (v, prob.h[j]))));
                    t.extend(s[k].map(|v| (v, 1.0)));
                    (t, prob.g[k])
                })
                .collect();
            let (vars, c0) = b.dual_norm(entries);
            for &v in &vars {
                b.lp.c[v] += wi * eps;
            }
            constant += wi * eps * c0;
            layout.objective_norm[i] = (vars, c0);
        }

        // Rows: A x(ξ) + Bξ + C y(ξ) + Λξ + ε‖AX + B + CY + Λ‖_* ≤ d.
        for r in 0..m {
            let lambda: Vec<Option<usize>> = (0..dxi).map(|k| orthant[k].then(|| b.lp.add_nonneg(0.0))).collect();
            let mut row: Terms = Vec::new();
            for &(j, a) in &a_nz[r] {
                row.push((x0[j], a));
                row.extend((0..dxi).filter_map(|k| x[j][k].map(|v| (v, a * xi[k]))));
            }
            for &(j, c) in &c_nz[r] {
                row.push((y0[j], c));
                row.extend((0..dxi).filter_map(|k| y[j][k].map(|v| (v, c * xi[k]))));
            }
            row.extend((0..dxi).filter_map(|k| lambda[k].map(|v| (v, xi[k]))));
            let mut rhs = prob.d[r] - dot(&prob.b[r], xi);
            if eps > 0.0 {
                let entries = (0..dxi)
                    .map(|k| {
                        let mut t: Terms = Vec::new();
                        t.extend(a_nz[r].iter().filter_map(|&(j, a)| x[j][k].map(|v| (v, a))));
                        t.extend(c_nz[r].iter().filter_map(|&(j, c)| y[j][k].map(|v| (v, c))));
                        t.extend(lambda[k].map(|v| (v, 1.0)));
                        (t, prob.b[r][k])
                    })
                    .collect();
                let (vars, c0) = b.dual_norm(entries);
                row.extend(vars.iter().map(|&v| (v, eps)));
                rhs -= eps * c0;
            }
            b.lp.add_row(row, Sense::Le, rhs);
        }
        layout.s[i] = s;
        layout.recourse[i] = Some(RecourseColumns::Direct { y0, y });
    }
    if !layout.active.iter().any(|&a| a) {
        return Err(Error::InvalidParameter("no sample has positive weight".into()));
    }
    Ok(SroLp { model: b.lp, constant, layout })
}

/// Vertex encoding of one sample: worst-case epigraph `θ` and rows at every
/// vertex `ξ ± ε e_k` of the ℓ1 ball.
#[allow(clippy::too_many_arguments)]
fn add_vertex_block(
    lp: &mut LpModel,
    prob: &DynamicProblem,
    x0: &[usize],
    x: &[Vec<Option<usize>>],
    y_mask: &[Vec<bool>],
    a_nz: &[Vec<(usize, f64)>],
    c_nz: &[Vec<(usize, f64)>],
    xi: &[f64],
    eps: f64,
    wi: f64,
) -> (usize, RecourseColumns) {
    let (dx, dxi, dy) = (prob.d_x(), prob.d_xi(), prob.d_y());
    let theta = lp.add_free(wi);
    let center: Vec<usize> = (0..dy).map(|_| lp.add_free(0.0)).collect();
    let slope: Vec<Vec<Option<usize>>> =
        y_mask.iter().map(|row| row.iter().map(|&ok| ok.then(|| lp.add_free(0.0))).collect()).collect();
    // x(v) = x0 + Xξ + σε X[:, k] as terms on the primary columns.
    let x_at = |j: usize, k: usize, sigma: f64| -> Terms {
        let mut t: Terms = vec![(x0[j], 1.0)];
        t.extend((0..dxi).filter_map(|l| x[j][l].map(|v| (v, xi[l] + if l == k { sigma * eps } else { 0.0 }))));
        t
    };
    for k in 0..dxi {
        for sigma in [1.0, -1.0] {
            let mut v = xi.to_vec();
            v[k] += sigma * eps;
            // θ ≥ f·x(v) + g·v + h·y(v)
            let mut obj: Terms = vec![(theta, -1.0)];
            for j in 0..dx {
                obj.extend(x_at(j, k, sigma).into_iter().map(|(c, a)| (c, a * prob.f[j])));
            }
            for j in 0..dy {
                obj.push((center[j], prob.h[j]));
                obj.extend(slope[j][k].map(|c| (c, sigma * prob.h[j])));
            }
            lp.add_row(obj, Sense::Le, -dot(&prob.g, &v));
            for r in 0..prob.m() {
                let mut row: Terms = Vec::new();
                for &(j, a) in &a_nz[r] {
                    row.extend(x_at(j, k, sigma).into_iter().map(|(c, t)| (c, a * t)));
                }
                for &(j, c) in &c_nz[r] {
                    row.push((center[j], c));
                    row.extend(slope[j][k].map(|col| (col, sigma * c)));
                }
                lp.add_row(row, Sense::Le, prob.d[r] - dot(&prob.b[r], &v));
            }
        }
    }
    (theta, RecourseColumns::Centered { center, slope })
}

fn read(point: &[f64], col: Option<usize>) -> f64 {
    col.map_or(0.0, |c| point[c])
}

impl SroLp {
    /// Policy stored in an LP point.
    pub fn policy(&self, point: &[f64], data: &Dataset, eps: f64) -> MultiPolicy {
        let l = &self.layout;
        let primary = PrimaryPolicy {
            x0: l.x0.iter().map(|&c| point[c]).collect(),
            x: l.x.iter().map(|row| row.iter().map(|&c| read(point, c)).collect()).collect(),
        };
        let recourse = l
            .recourse
            .iter()
            .zip(&data.xis)
            .map(|(r, xi)| {
                r.as_ref().map(|cols| match cols {
                    RecourseColumns::Direct { y0, y } => RecoursePolicy {
                        y0: y0.iter().map(|&c| point[c]).collect(),
                        y: y.iter().map(|row| row.iter().map(|&c| read(point, c)).collect()).collect(),
                    },
                    RecourseColumns::Centered { center, slope } => {
                        let y: Vec<Vec<f64>> =
                            slope.iter().map(|row| row.iter().map(|&c| read(point, c) / eps).collect()).collect();
                        let y0 = center.iter().zip(&y).map(|(&c, row)| point[c] - dot(row, xi)).collect();
                        RecoursePolicy { y0, y }
                    }
                })
            })
            .collect();
        MultiPolicy { primary, recourse }
    }

    /// Per-sample worst-case cost bounds encoded in an LP point.
    pub fn contributions(&self, prob: &DynamicProblem, data: &Dataset, eps: f64, point: &[f64]) -> Vec<f64> {
        let policy = self.policy(point, data, eps);
        (0..data.len())
            .map(|i| {
                let Some(rec) = &policy.recourse[i] else { return 0.0 };
                if let Some(theta) = self.layout.theta[i] {
                    return point[theta];
                }
                let xi = &data.xis[i];
                let s: f64 = self.layout.s[i].iter().zip(xi).map(|(c, v)| read(point, *c) * v).sum();
                let (vars, c0) = &self.layout.objective_norm[i];
                let norm: f64 = vars.iter().map(|&v| point[v]).sum::<f64>() + c0;
                dot(&prob.f, &policy.primary.decision(xi))
                    + dot(&prob.g, xi)
                    + dot(&prob.h, &rec.decision(xi))
                    + s
                    + if eps > 0.0 { eps * norm } else { 0.0 }
            })
            .collect()
    }
}

/// Solves the weighted sample-robust problem with per-sample recourse rules
/// (or one shared rule) and default options otherwise.
pub fn solve_sro(
    prob: &DynamicProblem,
    data: &Dataset,
    w: &WeightVector,
    u: &UncertaintySpec,
    shared_recourse: bool,
) -> Result<SroSolution> {
    solve_sro_with(prob, data, w, u, &SroOptions { shared_recourse, ..SroOptions::default() })
}

/// [`solve_sro`] with explicit options.
pub fn solve_sro_with(
    prob: &DynamicProblem,
    data: &Dataset,
    w: &WeightVector,
    u: &UncertaintySpec,
    opts: &SroOptions,
) -> Result<SroSolution> {
    let built = build_multipolicy_lp(prob, data, w, u, opts)?;
    let lp = solve_with(&built.model, opts.backend, &opts.interior)?;
    if lp.status != LpStatus::Optimal {
        return Err(Error::Lp(lp.status));
    }
    let policy = built.policy(&lp.point, data, u.eps);
    let contributions = built.contributions(prob, data, u.eps, &lp.point);
    Ok(SroSolution { objective: lp.value + built.constant, policy, lp, contributions })
}
