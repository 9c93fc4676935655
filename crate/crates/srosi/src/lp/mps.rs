//! Free-format MPS text export and import.
//!
//! Columns are named `c<j>`, rows `r<i>` and the objective row `obj`.
//! Variables without a `BOUNDS` entry have the MPS default `[0, ∞)`.

use super::model::{LpModel, Sense};
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt::Write;

/// Renders `model` as free-format MPS.
pub fn to_mps(model: &LpModel, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NAME {name}");
    out.push_str("ROWS\n N obj\n");
    for (i, s) in model.senses.iter().enumerate() {
        let tag = match s {
            Sense::Le => 'L',
            Sense::Eq => 'E',
            Sense::Ge => 'G',
        };
        let _ = writeln!(out, " {tag} r{i}");
    }
    out.push_str("COLUMNS\n");
    for (j, col) in model.columns().iter().enumerate() {
        if model.c[j] != 0.0 || col.is_empty() {
            let _ = writeln!(out, " c{j} obj {}", model.c[j]);
        }
        for &(i, v) in col {
            let _ = writeln!(out, " c{j} r{i} {v}");
        }
    }
    out.push_str("RHS\n");
    for (i, &b) in model.b.iter().enumerate() {
        if b != 0.0 {
            let _ = writeln!(out, " rhs r{i} {b}");
        }
    }
    out.push_str("BOUNDS\n");
    for j in 0..model.num_vars() {
        let (lo, hi) = (model.lo[j], model.hi[j]);
        if lo == 0.0 && hi == f64::INFINITY {
            continue;
        }
        if lo == hi {
            let _ = writeln!(out, " FX bnd c{j} {lo}");
        } else if lo == f64::NEG_INFINITY && hi == f64::INFINITY {
            let _ = writeln!(out, " FR bnd c{j}");
        } else {
            if lo == f64::NEG_INFINITY {
                let _ = writeln!(out, " MI bnd c{j}");
            } else {
                let _ = writeln!(out, " LO bnd c{j} {lo}");
            }
            if hi.is_finite() {
                let _ = writeln!(out, " UP bnd c{j} {hi}");
            }
        }
    }
    out.push_str("ENDATA\n");
    out
}

fn parse_num(tok: &str) -> Result<f64> {
    tok.parse::<f64>().map_err(|_| Error::Parse(format!("bad number {tok:?}")))
}

/// Parses free-format MPS produced by [`to_mps`] (or any file using the same
/// section subset: ROWS, COLUMNS, RHS, BOUNDS with LO/UP/FX/FR/MI/PL).
pub fn from_mps(text: &str) -> Result<LpModel> {
    #[derive(PartialEq)]
    enum Section {
        None,
        Rows,
        Columns,
        Rhs,
        Bounds,
    }
    let mut section = Section::None;
    let mut model = LpModel::new();
    let mut objective = String::new();
    let mut row_index: HashMap<String, usize> = HashMap::new();
    let mut col_index: HashMap<String, usize> = HashMap::new();
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();

    for line in text.lines() {
        if line.trim().is_empty() || line.starts_with('*') {
            continue;
        }
        if !line.starts_with(' ') {
            let head = line.split_whitespace().next().unwrap_or("");
            section = match head {
                "NAME" => Section::None,
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "BOUNDS" => Section::Bounds,
                "ENDATA" => break,
                other => return Err(Error::Parse(format!("unknown section {other}"))),
            };
            continue;
        }
        let tok: Vec<&str> = line.split_whitespace().collect();
        match section {
            Section::Rows => {
                let [kind, name] = tok[..] else {
                    return Err(Error::Parse(format!("bad ROWS line {line:?}")));
                };
                let sense = match kind {
                    "N" => {
                        objective = name.to_string();
                        continue;
                    }
                    "L" => Sense::Le,
                    "E" => Sense::Eq,
                    "G" => Sense::Ge,
                    _ => return Err(Error::Parse(format!("bad row type {kind}"))),
                };
                row_index.insert(name.to_string(), model.senses.len());
                model.senses.push(sense);
                model.b.push(0.0);
                model.rows.push(Vec::new());
            }
            Section::Columns => {
                if tok.len() < 3 || tok.len().is_multiple_of(2) {
                    return Err(Error::Parse(format!("bad COLUMNS line {line:?}")));
                }
                let j = match col_index.get(tok[0]) {
                    Some(&j) => j,
                    None => {
                        let j = model.add_var(0.0, f64::INFINITY, 0.0);
                        col_index.insert(tok[0].to_string(), j);
                        j
                    }
                };
                for pair in tok[1..].chunks(2) {
                    let v = parse_num(pair[1])?;
                    if pair[0] == objective {
                        model.c[j] += v;
                    } else {
                        let &i =
                            row_index.get(pair[0]).ok_or_else(|| Error::Parse(format!("unknown row {}", pair[0])))?;
                        entries.push((i, j, v));
                    }
                }
            }
            Section::Rhs => {
                for pair in tok[1..].chunks(2) {
                    if pair.len() != 2 {
                        return Err(Error::Parse(format!("bad RHS line {line:?}")));
                    }
                    if let Some(&i) = row_index.get(pair[0]) {
                        model.b[i] = parse_num(pair[1])?;
                    }
                }
            }
            Section::Bounds => {
                if tok.len() < 3 {
                    return Err(Error::Parse(format!("bad BOUNDS line {line:?}")));
                }
                let &j = col_index.get(tok[2]).ok_or_else(|| Error::Parse(format!("unknown column {}", tok[2])))?;
                let value = || -> Result<f64> {
                    tok.get(3).map_or(Err(Error::Parse(format!("missing bound in {line:?}"))), |t| parse_num(t))
                };
                match tok[0] {
                    "LO" => model.lo[j] = value()?,
                    "UP" => model.hi[j] = value()?,
                    "FX" => {
                        let v = value()?;
                        model.lo[j] = v;
                        model.hi[j] = v;
                    }
                    "FR" => {
                        model.lo[j] = f64::NEG_INFINITY;
                        model.hi[j] = f64::INFINITY;
                    }
                    "MI" => model.lo[j] = f64::NEG_INFINITY,
                    "PL" => model.hi[j] = f64::INFINITY,
                    other => return Err(Error::Parse(format!("unsupported bound type {other}"))),
                }
            }
            Section::None => {}
        }
    }
    for (i, j, v) in entries {
        model.rows[i].push((j, v));
    }
    for row in &mut model.rows {
        row.sort_by_key(|t| t.0);
    }
    model.validate()?;
    Ok(model)
}
