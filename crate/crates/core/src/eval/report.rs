//! Evaluation reports and their text/JSON renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::metrics::{confusion_matrix, mae, ordinal_mae, rmse, PredictionRecord};
use crate::error::{invalid, Result};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// How the reported predictions were obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Protocol {
    CrossValidation {
        folds: usize,
        seed: u64,
        resample_before_split: bool,
    },
    PercentageSplit {
        train_fraction: f64,
        seed: u64,
        resample_before_split: bool,
    },
    Holdout {
        train_instances: usize,
    },
}

impl Protocol {
    pub fn describe(&self) -> String {
        match self {
            Protocol::CrossValidation {
                folds,
                resample_before_split,
                ..
            } => format!(
                "Stratified {folds}-fold cross-validation{}",
                if *resample_before_split {
                    " on resampled data"
                } else {
                    ""
                }
            ),
            Protocol::PercentageSplit {
                train_fraction,
                resample_before_split,
                ..
            } => format!(
                "{:.0}% split test set{}",
                (1.0 - train_fraction) * 100.0,
                if *resample_before_split {
                    " on resampled data"
                } else {
                    ""
                }
            ),
            Protocol::Holdout { train_instances } => {
                format!("Separate test set (trained on {train_instances} instances)")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub schema_version: u32,
    pub classes: Vec<String>,
    pub protocol: Protocol,
    pub n: usize,
    /// Rows are actual classes, columns predicted classes.
    pub confusion: Vec<Vec<usize>>,
    /// `None` for classes with no actual instances.
    pub per_class_recall: Vec<Option<f64>>,
    pub accuracy: f64,
    pub mae: f64,
    pub rmse: f64,
    /// Mean |predicted index − actual index|.
    pub ordinal_mae: f64,
}

impl EvaluationReport {
    pub fn from_records(
        classes: Vec<String>,
        protocol: Protocol,
        records: &[PredictionRecord],
    ) -> Result<Self> {
        let k = classes.len();
        if records.iter().any(|r| r.scores.len() != k) {
            return Err(invalid("prediction scores do not match the class list"));
        }
        let confusion = confusion_matrix(records, k);
        let mut report =
            Self::from_confusion(classes, protocol, confusion, mae(records)?, rmse(records)?)?;
        report.ordinal_mae = ordinal_mae(records)?;
        Ok(report)
    }

    /// Builds a report from a confusion matrix and externally computed error
    /// metrics; the ordinal MAE is derived from the matrix.
    pub fn from_confusion(
        classes: Vec<String>,
        protocol: Protocol,
        confusion: Vec<Vec<usize>>,
        mae: f64,
        rmse: f64,
    ) -> Result<Self> {
        let k = classes.len();
        if confusion.len() != k || confusion.iter().any(|r| r.len() != k) {
            return Err(invalid("confusion matrix must be k×k"));
        }
        let n: usize = confusion.iter().flatten().sum();
        if n == 0 {
            return Err(invalid("a report needs at least one instance"));
        }
        let trace: usize = (0..k).map(|i| confusion[i][i]).sum();
        let per_class_recall = confusion
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let total: usize = row.iter().sum();
                (total > 0).then(|| row[i] as f64 / total as f64)
            })
            .collect();
        let distance: usize = confusion
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, &c)| c * i.abs_diff(j)))
            .sum();
        Ok(Self {
            schema_version: REPORT_SCHEMA_VERSION,
            classes,
            protocol,
            n,
            confusion,
            per_class_recall,
            accuracy: trace as f64 / n as f64,
            mae,
            rmse,
            ordinal_mae: distance as f64 / n as f64,
        })
    }

    pub fn class_totals(&self) -> Vec<usize> {
        self.confusion.iter().map(|r| r.iter().sum()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
}

/// One-letter class codes when the initials are distinct, full names otherwise.
fn class_codes(classes: &[String]) -> (Vec<String>, bool) {
    let initials: Vec<String> = classes
        .iter()
        .map(|c| {
            c.chars()
                .next()
                .map(|ch| ch.to_uppercase().to_string())
                .unwrap_or_default()
        })
        .collect();
    let distinct = initials
        .iter()
        .enumerate()
        .all(|(i, a)| !a.is_empty() && !initials[..i].contains(a));
    if distinct {
        (initials, true)
    } else {
        (classes.to_vec(), false)
    }
}

fn percent(x: f64) -> String {
    format!("{:.1}%", x * 100.0)
}

pub fn render_text(report: &EvaluationReport) -> String {
    let (codes, abbreviated) = class_codes(&report.classes);
    let cell = codes.iter().map(|c| c.len()).max().unwrap_or(1).max(
        report
            .confusion
            .iter()
            .flatten()
            .map(|c| c.to_string().len())
            .max()
            .unwrap_or(1),
    ) + 2;
    let first = codes
        .iter()
        .map(|c| c.len())
        .max()
        .unwrap_or(1)
        .max("Total".len())
        + 1;
    let total_w = report.n.to_string().len().max("Total".len()) + 2;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} ({} instances)",
        report.protocol.describe(),
        report.n
    );
    out.push('\n');

    let _ = write!(out, "{:<first$}", "Class");
    for c in &codes {
        let _ = write!(out, "{c:>cell$}");
    }
    let _ = writeln!(out, "{:>total_w$}  Classified Correctly (%)", "Total");

    let totals = report.class_totals();
    for (i, row) in report.confusion.iter().enumerate() {
        let _ = write!(out, "{:<first$}", codes[i]);
        for c in row {
            let _ = write!(out, "{c:>cell$}");
        }
        let recall = report.per_class_recall[i].map_or_else(|| "n/a".to_string(), percent);
        let _ = writeln!(out, "{:>total_w$}  {recall:>6}", totals[i]);
    }
    let pad = first + cell * codes.len();
    let _ = writeln!(
        out,
        "{:<pad$}{:>total_w$}  {:>6}",
        "Total",
        report.n,
        percent(report.accuracy)
    );

    if abbreviated {
        out.push('\n');
        let legend: Vec<String> = codes
            .iter()
            .zip(&report.classes)
            .map(|(c, name)| format!("{c} = {name}"))
            .collect();
        let _ = writeln!(out, "{}", legend.join(", "));
    }

    out.push('\n');
    let _ = writeln!(out, "{:<13}{:.4}", "MAE", report.mae);
    let _ = writeln!(out, "{:<13}{:.4}", "RMSE", report.rmse);
    let _ = writeln!(out, "{:<13}{:.4}", "Ordinal MAE", report.ordinal_mae);
    out
}

pub fn render_json(report: &EvaluationReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

pub fn render_report(report: &EvaluationReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Text => Ok(render_text(report)),
        ReportFormat::Json => render_json(report),
    }
}
