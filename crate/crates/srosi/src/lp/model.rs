use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Direction of a linear constraint row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

/// A linear program `min cᵀx  s.t.  A x (≤,=,≥) b,  lo ≤ x ≤ hi`.
///
/// Rows are stored sparsely as `(column, coefficient)` lists. Bounds may be
/// infinite.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LpModel {
    pub c: Vec<f64>,
    pub rows: Vec<Vec<(usize, f64)>>,
    pub senses: Vec<Sense>,
    pub b: Vec<f64>,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl LpModel {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a variable and returns its column index.
    pub fn add_var(&mut self, lo: f64, hi: f64, cost: f64) -> usize {
        self.c.push(cost);
        self.lo.push(lo);
        self.hi.push(hi);
        self.c.len() - 1
    }

    /// Adds a free variable (bounds `(-∞, ∞)`).
    pub fn add_free(&mut self, cost: f64) -> usize {
        self.add_var(f64::NEG_INFINITY, f64::INFINITY, cost)
    }

    /// Adds a nonnegative variable (bounds `[0, ∞)`).
    pub fn add_nonneg(&mut self, cost: f64) -> usize {
        self.add_var(0.0, f64::INFINITY, cost)
    }

    /// Adds a row. Repeated columns are merged and exact zeros dropped.
    pub fn add_row(&mut self, terms: Vec<(usize, f64)>, sense: Sense, rhs: f64) -> usize {
        let mut terms = terms;
        terms.sort_by_key(|t| t.0);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(terms.len());
        for (j, v) in terms {
            match merged.last_mut() {
                Some(last) if last.0 == j => last.1 += v,
                _ => merged.push((j, v)),
            }
        }
        merged.retain(|t| t.1 != 0.0);
        self.rows.push(merged);
        self.senses.push(sense);
        self.b.push(rhs);
        self.rows.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.c.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Checks dimensions, bound order and finiteness of coefficients.
    pub fn validate(&self) -> Result<()> {
        let n = self.c.len();
        let m = self.rows.len();
        if self.lo.len() != n || self.hi.len() != n {
            return Err(Error::InvalidModel("bound vectors do not match the objective".into()));
        }
        if self.senses.len() != m || self.b.len() != m {
            return Err(Error::InvalidModel("row metadata does not match the row count".into()));
        }
        if let Some(j) = (0..n).find(|&j| !self.c[j].is_finite()) {
            return Err(Error::InvalidModel(format!("objective coefficient {j} is not finite")));
        }
        for j in 0..n {
            let (lo, hi) = (self.lo[j], self.hi[j]);
            if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
                return Err(Error::InvalidModel(format!("variable {j} has bounds [{lo}, {hi}]")));
            }
        }
        for (i, row) in self.rows.iter().enumerate() {
            if !self.b[i].is_finite() {
                return Err(Error::InvalidModel(format!("right-hand side {i} is not finite")));
            }
            for &(j, v) in row {
                if j >= n {
                    return Err(Error::InvalidModel(format!("row {i} references column {j} of {n}")));
                }
                if !v.is_finite() {
                    return Err(Error::InvalidModel(format!("row {i} has a non-finite coefficient")));
                }
            }
        }
        Ok(())
    }

    /// Row activities `A x`.
    pub fn activities(&self, x: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|row| row.iter().map(|&(j, v)| v * x[j]).sum()).collect()
    }

    /// Objective value `cᵀx`.
    pub fn objective(&self, x: &[f64]) -> f64 {
        self.c.iter().zip(x).map(|(c, x)| c * x).sum()
    }

    /// Column-major copy of the constraint matrix: for each column the list
    /// of `(row, coefficient)` entries.
    pub fn columns(&self) -> Vec<Vec<(usize, f64)>> {
        let mut cols = vec![Vec::new(); self.num_vars()];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                cols[j].push((i, v));
            }
        }
        cols
    }
}

/// Termination status of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterLimit,
}

/// Outcome of a solve. `value`, `point` and `duals` are meaningful only when
/// `status` is `Optimal`.
///
/// Duals follow the convention `reduced cost = c − Aᵀ·duals`: a `≤` row has a
/// nonpositive dual and a `≥` row a nonnegative one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpResult {
    pub status: LpStatus,
    pub value: f64,
    pub point: Vec<f64>,
    pub duals: Vec<f64>,
    pub iterations: usize,
}

impl LpResult {
    pub(crate) fn failed(status: LpStatus, iterations: usize) -> Self {
        Self { status, value: f64::NAN, point: Vec::new(), duals: Vec::new(), iterations }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// Returns `self` when optimal, otherwise an error carrying the status.
    pub fn into_optimal(self) -> Result<Self> {
        if self.is_optimal() {
            Ok(self)
        } else {
            Err(Error::Lp(self.status))
        }
    }
}
