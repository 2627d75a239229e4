//! JSON space files and CSV matrix output.
//!
//! Spaces are stored as `{"points", "sigma", "causal"?, "mu"?, "labels"?}`.
//! Metric matrices use `null` for `+∞`.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{BitMatrix, Square};
use crate::space::{default_ids, FiniteLorentzSpace, FiniteMetricSpace, FinitePOM, PointId, DEFAULT_TOL};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceFile {
    #[serde(default)]
    pub points: Option<Vec<PointId>>,
    pub sigma: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub causal: Option<Vec<Vec<bool>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Vec<f64>>>,
}

impl SpaceFile {
    pub fn from_space(x: &FiniteLorentzSpace, mu: Option<Vec<f64>>) -> Self {
        SpaceFile {
            points: Some(x.points.clone()),
            sigma: x.sigma.to_rows(),
            causal: x.causal.as_ref().map(|c| c.to_rows()),
            mu,
            labels: x.labels.clone(),
        }
    }

    pub fn to_space(&self) -> Result<FiniteLorentzSpace> {
        let sigma = Square::from_rows(self.sigma.clone())?;
        let points = self.points.clone().unwrap_or_else(|| default_ids(sigma.n()));
        let mut x = FiniteLorentzSpace::new(points, sigma)?;
        if let Some(c) = &self.causal {
            x = x.with_causal(BitMatrix::from_rows(c)?)?;
        }
        if let Some(l) = &self.labels {
            x = x.with_labels(l.clone())?;
        }
        Ok(x)
    }

    /// The ordered measure space; `mu` defaults to unit weights.
    pub fn to_pom(&self) -> Result<FinitePOM> {
        let x = self.to_space()?;
        let mu = self.mu.clone().unwrap_or_else(|| vec![1.0; x.len()]);
        match &x.causal {
            Some(c) => FinitePOM::new(x.points.clone(), c.clone(), mu),
            None => FinitePOM::from_space(&x, mu, DEFAULT_TOL),
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Missing(format!("{}: {e}", path.display()))
}

pub fn read_space_file(path: &Path) -> Result<SpaceFile> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Malformed(e.to_string()))?;
    fs::write(path, text).map_err(|e| io_err(path, e))
}

/// Metric matrix as rows with `None` for infinite entries.
pub fn metric_rows(m: &FiniteMetricSpace) -> Vec<Vec<Option<f64>>> {
    (0..m.len()).map(|i| (0..m.len()).map(|j| Some(m.at(i, j)).filter(|v| v.is_finite())).collect()).collect()
}

pub fn metric_from_rows(rows: Vec<Vec<Option<f64>>>) -> Result<FiniteMetricSpace> {
    let d = rows.into_iter().map(|r| r.into_iter().map(|v| v.unwrap_or(f64::INFINITY)).collect()).collect();
    Ok(FiniteMetricSpace::from_matrix(Square::from_rows(d)?))
}

/// Square matrix as CSV; infinite entries are written as `inf`.
pub fn write_matrix_csv<T: std::fmt::Display>(out: &mut impl Write, rows: &[Vec<T>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.write_record(r.iter().map(|v| v.to_string())).map_err(|e| Error::Malformed(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Malformed(e.to_string()))
}
