use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

/// `N` historical pairs of side information `γⁱ` and sample paths `ξⁱ`, with
/// the sample-path coordinates partitioned into consecutive stages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub gammas: Vec<Vec<f64>>,
    pub xis: Vec<Vec<f64>>,
    pub stage_dims: Vec<usize>,
}

impl Dataset {
    /// Builds a dataset after checking shapes, finiteness and stage sizes.
    pub fn new(gammas: Vec<Vec<f64>>, xis: Vec<Vec<f64>>, stage_dims: Vec<usize>) -> Result<Self> {
        let d = Self { gammas, xis, stage_dims };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.gammas.len();
        if n == 0 {
            return Err(Error::InvalidParameter("dataset needs at least one sample".into()));
        }
        if self.xis.len() != n {
            return Err(Error::InvalidParameter(format!(
                "{n} side-information rows but {} sample paths",
                self.xis.len()
            )));
        }
        let dg = self.gammas[0].len();
        let dx = self.xis[0].len();
        if self.gammas.iter().any(|r| r.len() != dg) || self.xis.iter().any(|r| r.len() != dx) {
            return Err(Error::InvalidParameter("ragged dataset rows".into()));
        }
        if self.gammas.iter().chain(&self.xis).flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("dataset contains non-finite values".into()));
        }
        if self.stage_dims.is_empty() || self.stage_dims.contains(&0) {
            return Err(Error::InvalidParameter("stage dimensions must be positive".into()));
        }
        if self.stage_dims.iter().sum::<usize>() != dx {
            return Err(Error::InvalidParameter(format!(
                "stage dimensions {:?} do not sum to the path dimension {dx}",
                self.stage_dims
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    pub fn d_gamma(&self) -> usize {
        self.gammas[0].len()
    }

    pub fn d_xi(&self) -> usize {
        self.xis[0].len()
    }

    /// Rows `idx` of the dataset, in the given order.
    pub fn subset(&self, idx: &[usize]) -> Dataset {
        Dataset {
            gammas: idx.iter().map(|&i| self.gammas[i].clone()).collect(),
            xis: idx.iter().map(|&i| self.xis[i].clone()).collect(),
            stage_dims: self.stage_dims.clone(),
        }
    }

    /// Writes CSV with header `g1..g{dγ},x1..x{dξ}`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let header: Vec<String> =
            (1..=self.d_gamma()).map(|k| format!("g{k}")).chain((1..=self.d_xi()).map(|k| format!("x{k}"))).collect();
        wr.write_record(&header)?;
        for (g, x) in self.gammas.iter().zip(&self.xis) {
            wr.write_record(g.iter().chain(x).map(|v| v.to_string()))?;
        }
        wr.flush()?;
        Ok(())
    }

    /// Reads CSV with header `g1..g{dγ},x1..x{dξ}`; `stage_dims` partitions
    /// the `x` columns.
    pub fn read_csv<R: Read>(r: R, stage_dims: Vec<usize>) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let header = rd.headers()?.clone();
        let dg = header.iter().take_while(|h| h.starts_with('g')).count();
        let dx = header.len() - dg;
        for (k, h) in header.iter().enumerate() {
            let want = if k < dg { format!("g{}", k + 1) } else { format!("x{}", k - dg + 1) };
            if h.trim() != want {
                return Err(Error::Parse(format!("expected column {want}, found {h}")));
            }
        }
        let mut gammas = Vec::new();
        let mut xis = Vec::new();
        for rec in rd.records() {
            let rec = rec?;
            let vals: Vec<f64> = rec
                .iter()
                .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number {s:?}"))))
                .collect::<Result<_>>()?;
            gammas.push(vals[..dg].to_vec());
            xis.push(vals[dg..dg + dx].to_vec());
        }
        Dataset::new(gammas, xis, stage_dims)
    }
}

/// Nonnegative sample weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    w: Vec<f64>,
}

impl WeightVector {
    /// Validates nonnegativity and unit sum (within 1e-9).
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() || w.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidParameter("weights must be finite and nonnegative".into()));
        }
        let s: f64 = w.iter().sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!("weights sum to {s}, not 1")));
        }
        Ok(Self { w })
    }

    /// Uniform weights `1/n`.
    pub fn uniform(n: usize) -> Self {
        Self { w: vec![1.0 / n as f64; n] }
    }

    pub(crate) fn from_unnormalized(mass: Vec<f64>) -> Result<Self> {
        let total: f64 = mass.iter().sum();
        if !(total > 0.0) {
            return Err(Error::NoMass);
        }
        Ok(Self { w: mass.into_iter().map(|v| v / total).collect() })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    /// Indices with strictly positive weight.
    pub fn support(&self) -> Vec<usize> {
        (0..self.w.len()).filter(|&i| self.w[i] > 0.0).collect()
    }
}

impl std::ops::Index<usize> for WeightVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.w[i]
    }
}

pub(crate) fn check_query(data: &Dataset, query: &[f64]) -> Result<()> {
    if query.len() != data.d_gamma() {
        return Err(Error::InvalidParameter(format!(
            "query has dimension {} but side information has {}",
            query.len(),
            data.d_gamma()
        )));
    }
    if query.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("query is not finite".into()));
    }
    Ok(())
}

pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}
