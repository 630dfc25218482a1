//! Evaluation protocols: stratified k-fold cross-validation, percentage
//! split, and a separate test set.
//!
//! Every fit-time step (selection, resampling, training) sees only the
//! training portion unless [`Pipeline::resample_before_split`] is set, in
//! which case the whole dataset is resampled once up front.

mod folds;
mod metrics;
mod pipeline;
mod report;

pub use folds::{stratified_folds, stratified_split, train_size};
pub use metrics::{confusion_matrix, mae, ordinal_mae, rmse, PredictionRecord};
pub use pipeline::{FitSummary, FittedPipeline, Pipeline, DEFAULT_SEED};
pub use report::{
    render_json, render_report, render_text, EvaluationReport, Protocol, ReportFormat,
    REPORT_SCHEMA_VERSION,
};

use crate::balance::resample;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::par;

fn predict(fitted: &FittedPipeline, data: &Dataset, indices: &[usize]) -> Vec<PredictionRecord> {
    indices
        .iter()
        .map(|&i| {
            let c = fitted.classify_row(data.row(i));
            PredictionRecord {
                actual: data.label(i),
                predicted: c.class,
                scores: c.scores,
            }
        })
        .collect()
}

/// Applies up-front resampling when requested and returns the data to split
/// plus the pipeline to fit on each training portion.
fn prepare(dataset: &Dataset, pipeline: &Pipeline) -> Result<(Dataset, Pipeline)> {
    match (&pipeline.resample, pipeline.resample_before_split) {
        (Some(spec), true) => {
            let data = resample(dataset, spec)?;
            let inner = Pipeline {
                resample: None,
                ..*pipeline
            };
            Ok((data, inner))
        }
        _ => Ok((dataset.clone(), *pipeline)),
    }
}

fn classes(dataset: &Dataset) -> Vec<String> {
    dataset.ordering().labels().to_vec()
}

/// Pools the held-out predictions of `k` stratified folds into one report.
/// Fold `f` resamples with seed `resample.seed + f`.
pub fn cross_validate(
    dataset: &Dataset,
    k: usize,
    pipeline: &Pipeline,
    seed: u64,
) -> Result<EvaluationReport> {
    let (data, inner) = prepare(dataset, pipeline)?;
    let folds = stratified_folds(data.labels(), k, seed)?;
    let per_fold = par::try_map_range(k, |f| {
        let mut in_fold = vec![false; data.len()];
        for &i in &folds[f] {
            in_fold[i] = true;
        }
        let train_idx: Vec<usize> = (0..data.len()).filter(|&i| !in_fold[i]).collect();
        let fold_pipeline = match inner.resample {
            Some(r) => inner.with_resample_seed(r.seed.wrapping_add(f as u64)),
            None => inner,
        };
        let fitted = fold_pipeline.fit(&data.subset(&train_idx))?;
        Ok::<_, Error>(predict(&fitted, &data, &folds[f]))
    })?;
    let records: Vec<PredictionRecord> = per_fold.into_iter().flatten().collect();
    EvaluationReport::from_records(
        classes(&data),
        Protocol::CrossValidation {
            folds: k,
            seed,
            resample_before_split: pipeline.resample_before_split && pipeline.resample.is_some(),
        },
        &records,
    )
}

/// Fits on a stratified `train_fraction` share and reports on the rest.
pub fn percentage_split(
    dataset: &Dataset,
    train_fraction: f64,
    pipeline: &Pipeline,
    seed: u64,
) -> Result<EvaluationReport> {
    let (data, inner) = prepare(dataset, pipeline)?;
    let (train_idx, test_idx) = stratified_split(data.labels(), train_fraction, seed)?;
    let fitted = inner.fit(&data.subset(&train_idx))?;
    EvaluationReport::from_records(
        classes(&data),
        Protocol::PercentageSplit {
            train_fraction,
            seed,
            resample_before_split: pipeline.resample_before_split && pipeline.resample.is_some(),
        },
        &predict(&fitted, &data, &test_idx),
    )
}

/// Fits on `train` and reports on `test`; the test set is never resampled.
pub fn holdout(train: &Dataset, test: &Dataset, pipeline: &Pipeline) -> Result<EvaluationReport> {
    if !train.same_schema(test) {
        return Err(Error::Schema(format!(
            "train has attributes {:?} and classes {:?}; test has {:?} and {:?}",
            train.schema().names(),
            train.ordering().labels(),
            test.schema().names(),
            test.ordering().labels()
        )));
    }
    if test.is_empty() {
        return Err(crate::error::invalid("test set is empty"));
    }
    let fitted = pipeline.fit(train)?;
    let all: Vec<usize> = (0..test.len()).collect();
    EvaluationReport::from_records(
        classes(train),
        Protocol::Holdout {
            train_instances: train.len(),
        },
        &predict(&fitted, test, &all),
    )
}
