use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Vec3;
use crate::network::{predict_stresses, NetworkParams};
use crate::oracle::PathRecord;

/// Mean over steps of the squared Euclidean stress error.
pub fn mse(predictions: &[Vec3], targets: &[Vec3]) -> Result<f64> {
    if predictions.len() != targets.len() {
        return Err(Error::Dimension(format!(
            "{} predictions for {} targets",
            predictions.len(),
            targets.len()
        )));
    }
    if targets.is_empty() {
        return Err(Error::Empty("no time steps".into()));
    }
    Ok(squared_error(predictions, targets) / targets.len() as f64)
}

pub(crate) fn squared_error(predictions: &[Vec3], targets: &[Vec3]) -> f64 {
    predictions
        .iter()
        .zip(targets)
        .map(|(p, t)| (0..3).map(|c| (p[c] - t[c]).powi(2)).sum::<f64>())
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathError {
    pub id: usize,
    pub mse: f64,
    pub rmse: f64,
}

/// Errors of a network on a set of paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    /// MPa².
    pub mse: f64,
    /// MPa.
    pub rmse: f64,
    pub per_path: Vec<PathError>,
    /// Mean squared error of each stress component (MPa²).
    pub per_component: [f64; 3],
    pub n_steps: usize,
}

/// Loss over every step of every path.
pub fn loss(paths: &[PathRecord], params: &NetworkParams) -> Result<f64> {
    Ok(evaluate(paths, params)?.0.mse)
}

/// Error report plus the predictions, path by path.
pub fn evaluate(paths: &[PathRecord], params: &NetworkParams) -> Result<(ErrorReport, Vec<Vec<Vec3>>)> {
    params.validate()?;
    let n: usize = paths.iter().map(|p| p.len()).sum();
    if n == 0 {
        return Err(Error::Empty("no time steps to evaluate".into()));
    }
    let predictions = paths
        .par_iter()
        .map(|p| {
            if p.stresses.len() != p.strains.len() {
                return Err(Error::Dimension(format!("path {}: misaligned series", p.id)));
            }
            predict_stresses(&p.strains, params)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut per_component = [0.0; 3];
    let mut per_path = Vec::with_capacity(paths.len());
    let mut total = 0.0;
    for (p, pred) in paths.iter().zip(&predictions) {
        let mut acc = 0.0;
        for (y, t) in pred.iter().zip(&p.stresses) {
            for c in 0..3 {
                let e = (y[c] - t[c]).powi(2);
                per_component[c] += e;
                acc += e;
            }
        }
        total += acc;
        let m = if p.is_empty() { 0.0 } else { acc / p.len() as f64 };
        per_path.push(PathError {
            id: p.id,
            mse: m,
            rmse: m.sqrt(),
        });
    }
    let mse = total / n as f64;
    if !mse.is_finite() {
        return Err(Error::NonFinite("loss".into()));
    }
    for c in &mut per_component {
        *c /= n as f64;
    }
    Ok((
        ErrorReport {
            mse,
            rmse: mse.sqrt(),
            per_path,
            per_component,
            n_steps: n,
        },
        predictions,
    ))
}
