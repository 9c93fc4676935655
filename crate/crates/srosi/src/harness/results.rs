//! Result rows, their CSV form and the paired sign test.

use crate::error::{Error, Result};
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use statrs::distribution::{Binomial, DiscreteCDF};
use std::io::{Read, Write};

/// Header of experiment result files.
pub const RESULT_HEADER: &str = "method,N,eps,params,rep,oos_cost,solve_s,status";

/// Status of a successful row.
pub const STATUS_OK: &str = "ok";

/// One method on one replication. A failed row keeps its place with an
/// empty cost and the error in `status`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub method: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub eps: f64,
    pub params: String,
    pub rep: usize,
    pub oos_cost: Option<f64>,
    pub solve_s: f64,
    pub status: String,
}

impl ResultRow {
    pub fn is_ok(&self) -> bool {
        self.status == STATUS_OK
    }
}

/// `(N, rep, d₁, ε_N)` of the concentration study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub rep: usize,
    pub d1: f64,
    pub eps: f64,
}

/// `(N, rep, v̂, v*)` of the convergence study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub rep: usize,
    pub v_hat: f64,
    pub v_star: f64,
}

/// Writes rows as CSV with a header derived from the field names.
pub fn write_csv<T: Serialize, W: Write>(rows: &[T], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

/// Reads rows written by [`write_csv`].
pub fn read_csv<T: DeserializeOwned, R: Read>(r: R) -> Result<Vec<T>> {
    csv::Reader::from_reader(r).deserialize().map(|row| row.map_err(Error::from)).collect()
}

/// Outcome of a one-sided paired sign test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignTest {
    pub wins: usize,
    pub losses: usize,
    pub ties: usize,
    /// `P(X ≥ wins)` for `X ~ Binomial(wins + losses, 1/2)`.
    pub p_value: f64,
}

/// Tests whether `a` tends to be smaller than `b` in paired samples. Pairs
/// within `tie_tol` of each other count as ties and are dropped.
pub fn sign_test(a: &[f64], b: &[f64], tie_tol: f64) -> Result<SignTest> {
    if a.len() != b.len() {
        return Err(Error::InvalidParameter(format!("{} and {} paired values", a.len(), b.len())));
    }
    let mut t = SignTest { wins: 0, losses: 0, ties: 0, p_value: 1.0 };
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() <= tie_tol {
            t.ties += 1;
        } else if x < y {
            t.wins += 1;
        } else {
            t.losses += 1;
        }
    }
    let n = (t.wins + t.losses) as u64;
    if n > 0 && t.wins > 0 {
        let dist = Binomial::new(0.5, n).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        t.p_value = dist.sf(t.wins as u64 - 1);
    }
    Ok(t)
}
