use serde::{Deserialize, Serialize};

use crate::balance::{resample, ResampleSpec};
use crate::dataset::Dataset;
use crate::error::Result;
use crate::featsel::{greedy_stepwise, DEFAULT_BINS};
use crate::model::{Model, MulticlassModel};
use crate::ordinal::{self, Classification, OrdinalParams};

/// Default seed for every random step when none is given.
pub const DEFAULT_SEED: u64 = 1;

/// Model construction: feature selection, then resampling, then training.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pipeline {
    /// Equal-frequency bins for CFS selection; `None` keeps all attributes.
    pub selection_bins: Option<usize>,
    pub resample: Option<ResampleSpec>,
    pub model: OrdinalParams,
    /// `false` trains one multiclass tree instead of the ordinal decomposition.
    pub ordinal: bool,
    /// Resample the whole dataset once before splitting it for evaluation,
    /// instead of resampling each training portion.
    pub resample_before_split: bool,
}

impl Default for Pipeline {
    fn default() -> Self {
        Self {
            selection_bins: Some(DEFAULT_BINS),
            resample: Some(ResampleSpec::uniform(DEFAULT_SEED)),
            model: OrdinalParams::default(),
            ordinal: true,
            resample_before_split: false,
        }
    }
}

/// What a fit did, for reporting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub selected_attributes: Vec<String>,
    pub selection_merit: Option<f64>,
    pub training_class_counts: Vec<usize>,
    pub tree_nodes: Vec<usize>,
    pub tree_leaves: Vec<usize>,
}

/// A trained model plus the attribute projection it expects.
#[derive(Debug, Clone)]
pub struct FittedPipeline {
    pub selected: Vec<usize>,
    pub model: Model,
    pub summary: FitSummary,
}

impl FittedPipeline {
    /// Classifies a row laid out in the training dataset's full schema.
    pub fn classify_row(&self, row: &[f64]) -> Classification {
        let projected: Vec<f64> = self.selected.iter().map(|&a| row[a]).collect();
        self.model.classify(&projected)
    }
}

impl Pipeline {
    /// Copy with the resampling step's seed replaced.
    pub fn with_resample_seed(mut self, seed: u64) -> Self {
        if let Some(r) = &mut self.resample {
            r.seed = seed;
        }
        self
    }

    /// Fits selection, resampling and the classifier on `train`.
    pub fn fit(&self, train: &Dataset) -> Result<FittedPipeline> {
        let (selected, merit) = match self.selection_bins {
            Some(bins) => {
                let sel = greedy_stepwise(train, bins)?;
                let merit = sel.merit();
                (sel.attributes, Some(merit))
            }
            None => ((0..train.n_attributes()).collect(), None),
        };
        let projected = train.project(&selected);
        let data = match &self.resample {
            Some(spec) => resample(&projected, spec)?,
            None => projected,
        };
        let model = if self.ordinal {
            Model::Ordinal(ordinal::train(&data, &self.model)?)
        } else {
            Model::Multiclass(MulticlassModel::train(&data, &self.model)?)
        };
        let trees = model.trees();
        let summary = FitSummary {
            selected_attributes: data.schema().names().to_vec(),
            selection_merit: merit,
            training_class_counts: data.class_counts(),
            tree_nodes: trees.iter().map(|t| t.n_nodes()).collect(),
            tree_leaves: trees.iter().map(|t| t.n_leaves()).collect(),
        };
        Ok(FittedPipeline {
            selected,
            model,
            summary,
        })
    }
}
