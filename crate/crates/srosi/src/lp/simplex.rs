//! Bounded-variable revised simplex with an explicit dense basis inverse.
//!
//! Every row `i` gets a logical variable `r_i = aᵢᵀx` whose bounds encode the
//! row sense, so the working system is `A x − r = 0`. Rows whose starting
//! activity violates their bounds receive an artificial column and the first
//! phase minimizes the artificial sum.

use super::model::{LpModel, LpResult, LpStatus, Sense};
use crate::error::Result;

/// Tolerances and limits for [`solve_lp`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    /// Primal feasibility tolerance (absolute, scaled by `1 + ‖b‖∞`).
    pub feas_tol: f64,
    /// Smallest pivot magnitude accepted by the ratio test.
    pub pivot_tol: f64,
    /// Reduced-cost tolerance for optimality (scaled by `1 + ‖c‖∞`).
    pub opt_tol: f64,
    pub max_iters: usize,
    /// Consecutive non-improving pivots before switching to Bland's rule.
    pub stall_threshold: usize,
    /// Pivots between recomputations of the basis inverse.
    pub refactor_every: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            feas_tol: 1e-7,
            pivot_tol: 1e-9,
            opt_tol: 1e-9,
            max_iters: 200_000,
            stall_threshold: 50,
            refactor_every: 100,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Basic,
    AtLower,
    AtUpper,
    /// Nonbasic free variable sitting at zero.
    Zero,
}

enum Step {
    Optimal,
    Unbounded,
    Progress,
}

struct Simplex {
    m: usize,
    n: usize,
    cols: Vec<Vec<(usize, f64)>>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    cost: Vec<f64>,
    x: Vec<f64>,
    state: Vec<State>,
    basis: Vec<usize>,
    binv: Vec<f64>,
    pi: Vec<f64>,
    d: Vec<f64>,
    first_artificial: usize,
    opts: SolveOptions,
    feas_tol: f64,
    opt_tol: f64,
    iters: usize,
    pivots_since_refactor: usize,
    bland: bool,
    stall: usize,
    best: f64,
}

/// Solves `model` with the bounded-variable two-phase revised simplex.
///
/// Returns an error only when the model itself is malformed; infeasibility,
/// unboundedness and the iteration limit are reported through the status.
pub fn solve_lp(model: &LpModel, opts: &SolveOptions) -> Result<LpResult> {
    model.validate()?;
    let mut s = Simplex::new(model, opts.clone());
    Ok(s.run(model))
}

impl Simplex {
    fn new(model: &LpModel, opts: SolveOptions) -> Self {
        let n = model.num_vars();
        let m = model.num_rows();
        let mut cols = model.columns();
        let mut lo = model.lo.clone();
        let mut hi = model.hi.clone();
        let mut x: Vec<f64> = (0..n)
            .map(|j| {
                if lo[j].is_finite() {
                    lo[j]
                } else if hi[j].is_finite() {
                    hi[j]
                } else {
                    0.0
                }
            })
            .collect();
        let mut state: Vec<State> = (0..n)
            .map(|j| {
                if lo[j].is_finite() {
                    State::AtLower
                } else if hi[j].is_finite() {
                    State::AtUpper
                } else {
                    State::Zero
                }
            })
            .collect();
        let bnorm = model.b.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let cnorm = model.c.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let feas_tol = opts.feas_tol * (1.0 + bnorm);
        let activity = model.activities(&x);

        for i in 0..m {
            cols.push(vec![(i, -1.0)]);
            let (l, h) = match model.senses[i] {
                Sense::Le => (f64::NEG_INFINITY, model.b[i]),
                Sense::Ge => (model.b[i], f64::INFINITY),
                Sense::Eq => (model.b[i], model.b[i]),
            };
            lo.push(l);
            hi.push(h);
            x.push(activity[i]);
            state.push(State::Basic);
        }
        let first_artificial = n + m;
        let mut basis: Vec<usize> = (0..m).map(|i| n + i).collect();
        let mut diag = vec![-1.0; m];
        for i in 0..m {
            let r = n + i;
            let a = activity[i];
            let target = if a < lo[r] {
                lo[r]
            } else if a > hi[r] {
                hi[r]
            } else {
                continue;
            };
            x[r] = target;
            state[r] = if target == lo[r] { State::AtLower } else { State::AtUpper };
            let sigma = if target > a { 1.0 } else { -1.0 };
            cols.push(vec![(i, sigma)]);
            lo.push(0.0);
            hi.push(f64::INFINITY);
            x.push((target - a).abs());
            state.push(State::Basic);
            basis[i] = cols.len() - 1;
            diag[i] = sigma;
        }
        let total = cols.len();
        let mut binv = vec![0.0; m * m];
        for i in 0..m {
            binv[i * m + i] = 1.0 / diag[i];
        }
        Self {
            m,
            n,
            cols,
            lo,
            hi,
            cost: vec![0.0; total],
            x,
            state,
            basis,
            binv,
            pi: vec![0.0; m],
            d: vec![0.0; total],
            first_artificial,
            opt_tol: opts.opt_tol * (1.0 + cnorm),
            opts,
            feas_tol,
            iters: 0,
            pivots_since_refactor: 0,
            bland: false,
            stall: 0,
            best: f64::INFINITY,
        }
    }

    fn run(&mut self, model: &LpModel) -> LpResult {
        let total = self.cols.len();
        if total > self.first_artificial {
            for j in self.first_artificial..total {
                self.cost[j] = 1.0;
            }
            match self.phase() {
                Some(LpStatus::Optimal) => {}
                Some(status) if status != LpStatus::Unbounded => return LpResult::failed(status, self.iters),
                _ => return LpResult::failed(LpStatus::IterLimit, self.iters),
            }
            let infeasibility: f64 = (self.first_artificial..total).map(|j| self.x[j]).sum();
            if infeasibility > self.feas_tol {
                return LpResult::failed(LpStatus::Infeasible, self.iters);
            }
            for j in self.first_artificial..total {
                self.cost[j] = 0.0;
                self.lo[j] = 0.0;
                self.hi[j] = 0.0;
                self.x[j] = 0.0;
                if self.state[j] != State::Basic {
                    self.state[j] = State::AtLower;
                }
            }
            self.drive_out_artificials();
        }
        for j in 0..self.n {
            self.cost[j] = model.c[j];
        }
        match self.phase() {
            Some(LpStatus::Optimal) => {}
            Some(status) => return LpResult::failed(status, self.iters),
            None => return LpResult::failed(LpStatus::IterLimit, self.iters),
        }
        let point = self.x[..self.n].to_vec();
        LpResult {
            status: LpStatus::Optimal,
            value: model.objective(&point),
            point,
            duals: self.pi.clone(),
            iterations: self.iters,
        }
    }

    /// Runs pivots until optimality of the current cost vector. Returns
    /// `None` when the basis could not be refactored.
    fn phase(&mut self) -> Option<LpStatus> {
        self.bland = false;
        self.stall = 0;
        self.best = f64::INFINITY;
        let mut confirmed = false;
        if !self.refactor() {
            return None;
        }
        loop {
            if self.iters >= self.opts.max_iters {
                return Some(LpStatus::IterLimit);
            }
            match self.step() {
                Step::Unbounded => return Some(LpStatus::Unbounded),
                Step::Optimal => {
                    if confirmed {
                        return Some(LpStatus::Optimal);
                    }
                    // Recompute from a fresh inverse before declaring optimality.
                    if !self.refactor() {
                        return None;
                    }
                    confirmed = true;
                }
                Step::Progress => {
                    confirmed = false;
                    self.pivots_since_refactor += 1;
                    if self.pivots_since_refactor >= self.opts.refactor_every && !self.refactor() {
                        return None;
                    }
                }
            }
        }
    }

    fn objective(&self) -> f64 {
        self.cost.iter().zip(&self.x).map(|(c, x)| c * x).sum()
    }

    fn compute_duals(&mut self) {
        let m = self.m;
        self.pi.iter_mut().for_each(|v| *v = 0.0);
        for p in 0..m {
            let cb = self.cost[self.basis[p]];
            if cb != 0.0 {
                let row = &self.binv[p * m..(p + 1) * m];
                for (pk, bk) in self.pi.iter_mut().zip(row) {
                    *pk += cb * bk;
                }
            }
        }
        for j in 0..self.cols.len() {
            self.d[j] = if self.state[j] == State::Basic {
                0.0
            } else {
                self.cost[j] - self.cols[j].iter().map(|&(i, v)| self.pi[i] * v).sum::<f64>()
            };
        }
    }

    fn choose_entering(&self) -> Option<(usize, f64)> {
        let tol = self.opt_tol;
        let mut best: Option<(usize, f64)> = None;
        let mut best_mag = 0.0;
        for j in 0..self.cols.len() {
            let dj = self.d[j];
            let dir = match self.state[j] {
                State::Basic => continue,
                _ if self.lo[j] == self.hi[j] => continue,
                State::AtLower if dj < -tol => 1.0,
                State::AtUpper if dj > tol => -1.0,
                State::Zero if dj.abs() > tol => -dj.signum(),
                _ => continue,
            };
            if self.bland {
                return Some((j, dir));
            }
            if dj.abs() > best_mag {
                best_mag = dj.abs();
                best = Some((j, dir));
            }
        }
        best
    }

    fn ftran(&self, j: usize) -> Vec<f64> {
        let m = self.m;
        let mut alpha = vec![0.0; m];
        for &(k, v) in &self.cols[j] {
            for (i, a) in alpha.iter_mut().enumerate() {
                *a += self.binv[i * m + k] * v;
            }
        }
        alpha
    }

    fn step(&mut self) -> Step {
        let Some((q, dir)) = self.choose_entering() else {
            return Step::Optimal;
        };
        let alpha = self.ftran(q);
        let range = self.hi[q] - self.lo[q];
        let leave = if self.bland { self.ratio_bland(&alpha, dir) } else { self.ratio_harris(&alpha, dir) };
        let (t, leave) = match leave {
            Some((t, p)) if t < range => (t, Some(p)),
            _ if range.is_finite() => (range, None),
            Some((t, p)) => (t, Some(p)),
            None => return Step::Unbounded,
        };
        self.iters += 1;
        self.x[q] += dir * t;
        for p in 0..self.m {
            if alpha[p] != 0.0 {
                let v = self.basis[p];
                self.x[v] -= dir * t * alpha[p];
            }
        }
        match leave {
            None => {
                self.state[q] = if dir > 0.0 { State::AtUpper } else { State::AtLower };
                self.x[q] = if dir > 0.0 { self.hi[q] } else { self.lo[q] };
            }
            Some(p) => {
                let l = self.basis[p];
                if dir * alpha[p] > 0.0 {
                    self.x[l] = self.lo[l];
                    self.state[l] = State::AtLower;
                } else {
                    self.x[l] = self.hi[l];
                    self.state[l] = State::AtUpper;
                }
                if !self.lo[l].is_finite() && !self.hi[l].is_finite() {
                    self.state[l] = State::Zero;
                }
                self.pivot(p, q, &alpha);
            }
        }
        let obj = self.objective();
        if obj < self.best - 1e-12 * (1.0 + obj.abs()) {
            self.best = obj;
            self.stall = 0;
            self.bland = false;
        } else {
            self.stall += 1;
            if self.stall >= self.opts.stall_threshold {
                self.bland = true;
            }
        }
        Step::Progress
    }

    /// Two-pass Harris ratio test. Returns the step length and the leaving
    /// basis position, or `None` when no basic variable blocks.
    fn ratio_harris(&self, alpha: &[f64], dir: f64) -> Option<(f64, usize)> {
        let tol = self.feas_tol;
        let mut relaxed = f64::INFINITY;
        for p in 0..self.m {
            let a = dir * alpha[p];
            let v = self.basis[p];
            if a > self.opts.pivot_tol && self.lo[v].is_finite() {
                relaxed = relaxed.min((self.x[v] - self.lo[v] + tol) / a);
            } else if a < -self.opts.pivot_tol && self.hi[v].is_finite() {
                relaxed = relaxed.min((self.hi[v] - self.x[v] + tol) / -a);
            }
        }
        if !relaxed.is_finite() {
            return None;
        }
        let mut best: Option<(f64, usize)> = None;
        let mut best_mag = 0.0;
        for p in 0..self.m {
            let a = dir * alpha[p];
            let v = self.basis[p];
            let ratio = if a > self.opts.pivot_tol && self.lo[v].is_finite() {
                (self.x[v] - self.lo[v]) / a
            } else if a < -self.opts.pivot_tol && self.hi[v].is_finite() {
                (self.hi[v] - self.x[v]) / -a
            } else {
                continue;
            };
            if ratio <= relaxed && a.abs() > best_mag {
                best_mag = a.abs();
                best = Some((ratio.max(0.0), p));
            }
        }
        best
    }

    /// Exact minimum-ratio test with ties broken by the smallest variable index.
    fn ratio_bland(&self, alpha: &[f64], dir: f64) -> Option<(f64, usize)> {
        let mut best: Option<(f64, usize)> = None;
        for p in 0..self.m {
            let a = dir * alpha[p];
            let v = self.basis[p];
            let ratio = if a > self.opts.pivot_tol && self.lo[v].is_finite() {
                (self.x[v] - self.lo[v]) / a
            } else if a < -self.opts.pivot_tol && self.hi[v].is_finite() {
                (self.hi[v] - self.x[v]) / -a
            } else {
                continue;
            };
            let ratio = ratio.max(0.0);
            best = match best {
                Some((r, bp)) if ratio > r || (ratio == r && self.basis[bp] < v) => Some((r, bp)),
                _ => Some((ratio, p)),
            };
        }
        best
    }

    fn pivot(&mut self, p: usize, q: usize, alpha: &[f64]) {
        let m = self.m;
        let l = self.basis[p];
        let ap = alpha[p];
        for k in 0..m {
            self.binv[p * m + k] /= ap;
        }
        let (before, rest) = self.binv.split_at_mut(p * m);
        let (prow, after) = rest.split_at_mut(m);
        for (i, row) in before.chunks_exact_mut(m).enumerate() {
            let f = alpha[i];
            if f != 0.0 {
                row.iter_mut().zip(prow.iter()).for_each(|(r, pr)| *r -= f * pr);
            }
        }
        for (off, row) in after.chunks_exact_mut(m).enumerate() {
            let f = alpha[p + 1 + off];
            if f != 0.0 {
                row.iter_mut().zip(prow.iter()).for_each(|(r, pr)| *r -= f * pr);
            }
        }
        self.basis[p] = q;
        self.state[q] = State::Basic;
        debug_assert!(self.state[l] != State::Basic);
        self.compute_duals();
    }

    /// Recomputes the basis inverse by Gauss–Jordan elimination and the basic
    /// values from the nonbasic ones. Returns `false` if the basis is singular.
    fn refactor(&mut self) -> bool {
        let m = self.m;
        self.pivots_since_refactor = 0;
        let mut bmat = vec![0.0; m * m];
        for (p, &j) in self.basis.iter().enumerate() {
            for &(i, v) in &self.cols[j] {
                bmat[i * m + p] = v;
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for col in 0..m {
            let mut piv = col;
            let mut big = bmat[col * m + col].abs();
            for r in col + 1..m {
                let v = bmat[r * m + col].abs();
                if v > big {
                    big = v;
                    piv = r;
                }
            }
            if big < 1e-12 {
                return false;
            }
            if piv != col {
                for k in 0..m {
                    bmat.swap(col * m + k, piv * m + k);
                    inv.swap(col * m + k, piv * m + k);
                }
            }
            let d = bmat[col * m + col];
            for k in 0..m {
                bmat[col * m + k] /= d;
                inv[col * m + k] /= d;
            }
            for r in 0..m {
                if r == col {
                    continue;
                }
                let f = bmat[r * m + col];
                if f != 0.0 {
                    for k in 0..m {
                        bmat[r * m + k] -= f * bmat[col * m + k];
                        inv[r * m + k] -= f * inv[col * m + k];
                    }
                }
            }
        }
        self.binv = inv;
        let mut rhs = vec![0.0; m];
        for (j, col) in self.cols.iter().enumerate() {
            if self.state[j] != State::Basic && self.x[j] != 0.0 {
                for &(i, v) in col {
                    rhs[i] -= v * self.x[j];
                }
            }
        }
        for p in 0..m {
            let row = &self.binv[p * m..(p + 1) * m];
            self.x[self.basis[p]] = row.iter().zip(&rhs).map(|(a, b)| a * b).sum();
        }
        self.compute_duals();
        true
    }

    /// Pivots basic artificials (all at zero) out of the basis where a
    /// nonartificial column can replace them.
    fn drive_out_artificials(&mut self) {
        let m = self.m;
        for p in 0..m {
            if self.basis[p] < self.first_artificial {
                continue;
            }
            let row: Vec<f64> = self.binv[p * m..(p + 1) * m].to_vec();
            let mut best: Option<(usize, f64)> = None;
            for j in 0..self.first_artificial {
                if self.state[j] == State::Basic {
                    continue;
                }
                let a: f64 = self.cols[j].iter().map(|&(i, v)| row[i] * v).sum();
                if a.abs() > 1e-7 && best.is_none_or(|(_, b)| a.abs() > b.abs()) {
                    best = Some((j, a));
                }
            }
            if let Some((q, _)) = best {
                let alpha = self.ftran(q);
                let l = self.basis[p];
                self.state[l] = State::AtLower;
                self.pivot(p, q, &alpha);
            }
        }
    }
}
