//! Classification error metrics over per-class scores.
//!
//! For a record with scores `p` and actual class `a`, the per-class errors are
//! `e_j = p_j − [j == a]`. MAE and RMSE average `|e_j|` and `e_j²` over all
//! `n · k` terms.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::tree::argmax_lowest;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub actual: usize,
    pub predicted: usize,
    pub scores: Vec<f64>,
}

impl PredictionRecord {
    /// Record whose prediction is the argmax of `scores` (lowest class on ties).
    pub fn new(actual: usize, scores: Vec<f64>) -> Self {
        Self {
            actual,
            predicted: argmax_lowest(&scores),
            scores,
        }
    }
}

fn check(records: &[PredictionRecord]) -> Result<usize> {
    let first = records
        .first()
        .ok_or_else(|| invalid("metrics need at least one prediction"))?;
    let k = first.scores.len();
    if records.iter().any(|r| r.scores.len() != k || r.actual >= k) {
        return Err(invalid(
            "prediction records disagree on the number of classes",
        ));
    }
    Ok(k)
}

fn errors(r: &PredictionRecord) -> impl Iterator<Item = f64> + '_ {
    r.scores
        .iter()
        .enumerate()
        .map(move |(j, &p)| p - if j == r.actual { 1.0 } else { 0.0 })
}

pub fn mae(records: &[PredictionRecord]) -> Result<f64> {
    let k = check(records)?;
    let sum: f64 = records.iter().flat_map(errors).map(f64::abs).sum();
    Ok(sum / (records.len() * k) as f64)
}

pub fn rmse(records: &[PredictionRecord]) -> Result<f64> {
    let k = check(records)?;
    let sum: f64 = records.iter().flat_map(errors).map(|e| e * e).sum();
    Ok((sum / (records.len() * k) as f64).sqrt())
}

/// Mean absolute distance between predicted and actual class indices.
pub fn ordinal_mae(records: &[PredictionRecord]) -> Result<f64> {
    check(records)?;
    let sum: usize = records.iter().map(|r| r.predicted.abs_diff(r.actual)).sum();
    Ok(sum as f64 / records.len() as f64)
}

/// k×k counts, rows = actual class, columns = predicted class.
pub fn confusion_matrix(records: &[PredictionRecord], k: usize) -> Vec<Vec<usize>> {
    let mut m = vec![vec![0; k]; k];
    for r in records {
        m[r.actual][r.predicted] += 1;
    }
    m
}
