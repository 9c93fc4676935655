use crate::error::{Error, Result};
use crate::norm::Norm;
use serde::{Deserialize, Serialize};

/// Version tag of the problem JSON document.
pub const PROBLEM_SCHEMA_VERSION: u32 = 1;

/// Multi-stage cost in compact block form:
///
/// `c(x, ζ) = f·x + g·ζ + min_y { h·y : A x + B ζ + C y ≤ d }`
///
/// Stage `t` owns `x_dims[t]` decisions, `xi_dims[t]` uncertain
/// coordinates, `y_dims[t]` recourse variables and `row_dims[t]` rows. Row
/// blocks of `A` and `B` may reference only current and earlier stages; `C`
/// is block diagonal. Stage dimensions may be zero except `xi_dims`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicProblem {
    #[serde(default = "schema_version")]
    pub version: u32,
    pub x_dims: Vec<usize>,
    pub xi_dims: Vec<usize>,
    pub y_dims: Vec<usize>,
    pub row_dims: Vec<usize>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    pub h: Vec<f64>,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    pub c: Vec<Vec<f64>>,
    pub d: Vec<f64>,
    /// Keep here-and-now decisions nonnegative. Under orthant support the
    /// rules are restricted to `x0 ≥ 0` and `X ≥ 0`; under free support
    /// `x(ζ) ≥ 0` is imposed robustly over every uncertainty set.
    #[serde(default)]
    pub x_nonneg: bool,
}

fn schema_version() -> u32 {
    PROBLEM_SCHEMA_VERSION
}

fn stage_index(dims: &[usize]) -> Vec<usize> {
    dims.iter().enumerate().flat_map(|(t, &n)| std::iter::repeat_n(t, n)).collect()
}

impl DynamicProblem {
    pub fn num_stages(&self) -> usize {
        self.xi_dims.len()
    }

    pub fn d_x(&self) -> usize {
        self.x_dims.iter().sum()
    }

    pub fn d_xi(&self) -> usize {
        self.xi_dims.iter().sum()
    }

    pub fn d_y(&self) -> usize {
        self.y_dims.iter().sum()
    }

    pub fn m(&self) -> usize {
        self.row_dims.iter().sum()
    }

    pub fn x_stage(&self) -> Vec<usize> {
        stage_index(&self.x_dims)
    }

    pub fn xi_stage(&self) -> Vec<usize> {
        stage_index(&self.xi_dims)
    }

    pub fn y_stage(&self) -> Vec<usize> {
        stage_index(&self.y_dims)
    }

    pub fn row_stage(&self) -> Vec<usize> {
        stage_index(&self.row_dims)
    }

    /// `X[j][k]` may be nonzero only when decision `j` comes in a strictly
    /// later stage than uncertain coordinate `k`.
    pub fn x_mask(&self) -> Vec<Vec<bool>> {
        let xs = self.x_stage();
        let ks = self.xi_stage();
        xs.iter().map(|&sj| ks.iter().map(|&sk| sj > sk).collect()).collect()
    }

    /// `Y[j][k]` may be nonzero only when recourse `j` comes in the same or a
    /// later stage than uncertain coordinate `k`.
    pub fn y_mask(&self) -> Vec<Vec<bool>> {
        let ys = self.y_stage();
        let ks = self.xi_stage();
        ys.iter().map(|&sj| ks.iter().map(|&sk| sj >= sk).collect()).collect()
    }

    /// Checks dimensions, finiteness and the block patterns.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidModel(msg));
        if self.version != PROBLEM_SCHEMA_VERSION {
            return bad(format!("problem schema version {} is not supported", self.version));
        }
        let t = self.xi_dims.len();
        if t == 0 || self.x_dims.len() != t || self.y_dims.len() != t || self.row_dims.len() != t {
            return bad("per-stage dimension lists must share a positive length".into());
        }
        if self.xi_dims.contains(&0) {
            return bad("every stage needs at least one uncertain coordinate".into());
        }
        let (dx, dxi, dy, m) = (self.d_x(), self.d_xi(), self.d_y(), self.m());
        if self.f.len() != dx || self.g.len() != dxi || self.h.len() != dy || self.d.len() != m {
            return bad("cost or right-hand-side vector has the wrong length".into());
        }
        let shape_ok = |mat: &Vec<Vec<f64>>, cols: usize| mat.len() == m && mat.iter().all(|r| r.len() == cols);
        if !shape_ok(&self.a, dx) || !shape_ok(&self.b, dxi) || !shape_ok(&self.c, dy) {
            return bad("constraint matrix has the wrong shape".into());
        }
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        if !finite(&self.f)
            || !finite(&self.g)
            || !finite(&self.h)
            || !finite(&self.d)
            || !self.a.iter().chain(&self.b).chain(&self.c).all(|r| finite(r))
        {
            return bad("problem data must be finite".into());
        }
        let rs = self.row_stage();
        let check = |mat: &Vec<Vec<f64>>, stages: &[usize], ok: fn(usize, usize) -> bool, name: &str| -> Result<()> {
            for (r, row) in mat.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    if v != 0.0 && !ok(rs[r], stages[j]) {
                        return Err(Error::InvalidModel(format!(
                            "{name}[{r}][{j}] = {v} lies outside the stage pattern"
                        )));
                    }
                }
            }
            Ok(())
        };
        check(&self.a, &self.x_stage(), |row, col| col <= row, "A")?;
        check(&self.b, &self.xi_stage(), |row, col| col <= row, "B")?;
        check(&self.c, &self.y_stage(), |row, col| col == row, "C")?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: DynamicProblem = serde_json::from_str(text)?;
        p.validate()?;
        Ok(p)
    }
}

/// Whether uncertain paths are confined to the nonnegative orthant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Support {
    NonnegOrthant,
    Free,
}

/// The uncertainty sets `{ζ ∈ Ξ : ‖ζ − ξⁱ‖ ≤ ε}` around every sample path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncertaintySpec {
    pub eps: f64,
    pub norm: Norm,
    pub support: Support,
}

impl UncertaintySpec {
    pub fn new(eps: f64, norm: Norm, support: Support) -> Result<Self> {
        let u = Self { eps, norm, support };
        u.validate()?;
        Ok(u)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps >= 0.0) || !self.eps.is_finite() {
            return Err(Error::InvalidParameter(format!("radius {} must be finite and nonnegative", self.eps)));
        }
        Ok(())
    }
}
