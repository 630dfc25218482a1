//! Ordinal classification by k−1 binary "greater than" decompositions.
//!
//! For classes v_1 < … < v_k, tree `i` (0-based) is trained to answer
//! "is the class above v_{i+1}?". At prediction time the positive-class
//! probabilities `bp` are recombined into per-class scores:
//!
//! ```text
//! score(v_1) = 1 − bp[0]
//! score(v_i) = max(bp[i−2] − bp[i−1], 0)     1 < i < k
//! score(v_k) = bp[k−2]
//! ```
//!
//! and the highest score wins, ties going to the lower class.

use serde::{Deserialize, Serialize};

use crate::dataset::{AttributeSchema, ClassOrdering, Dataset};
use crate::error::{invalid, Error, Result};
use crate::par;
use crate::tree::{self, argmax_lowest, DecisionTree, TreeParams};

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// `values[i]` = Pr(class > v_{i+1}), one entry per binary tree.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryProbVector(Vec<f64>);

impl BinaryProbVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid(
                "binary probability vector must have at least one entry",
            ));
        }
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(invalid(format!("binary probability {v} outside [0, 1]")));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// Number of classes the vector decodes to.
    pub fn n_classes(&self) -> usize {
        self.0.len() + 1
    }
}

/// How the top class's score is derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CombineRule {
    /// score(v_k) = Pr(class > v_{k−1}); scores telescope to 1 for monotone input.
    #[default]
    Telescoping,
    /// score(v_k) = 1 − Pr(class > v_{k−1}), kept for compatibility with a
    /// variant seen in print. Does not sum to 1.
    TopComplement,
}

/// Per-class scores from binary "greater than" probabilities. Scores are not
/// renormalized.
pub fn combine_probabilities(bp: &BinaryProbVector, rule: CombineRule) -> Vec<f64> {
    let b = bp.values();
    let k = bp.n_classes();
    let mut scores = Vec::with_capacity(k);
    scores.push(1.0 - b[0]);
    for i in 1..k - 1 {
        scores.push((b[i - 1] - b[i]).max(0.0));
    }
    scores.push(match rule {
        CombineRule::Telescoping => b[k - 2],
        CombineRule::TopComplement => 1.0 - b[k - 2],
    });
    scores
}

/// Binary relabeling: 1 iff the original label index is greater than `i`.
pub fn derive_binary_dataset(dataset: &Dataset, i: usize) -> Result<Dataset> {
    let ordering = dataset.ordering();
    if i + 1 >= ordering.len() {
        return Err(invalid(format!(
            "threshold index {i} out of range for {} classes",
            ordering.len()
        )));
    }
    let cut = ordering.label(i);
    let binary = ClassOrdering::new([format!("<= {cut}"), format!("> {cut}")])?;
    let labels = dataset
        .labels()
        .iter()
        .map(|&l| usize::from(l > i))
        .collect();
    dataset.relabel(binary, labels)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrdinalParams {
    pub tree: TreeParams,
    #[serde(default)]
    pub combine: CombineRule,
    /// Divide scores by their sum before reporting.
    #[serde(default)]
    pub normalize: bool,
    /// Add-one smoothing of leaf frequencies.
    #[serde(default)]
    pub laplace: bool,
}

impl Default for OrdinalParams {
    fn default() -> Self {
        Self {
            tree: TreeParams::default(),
            combine: CombineRule::Telescoping,
            normalize: false,
            laplace: false,
        }
    }
}

impl From<TreeParams> for OrdinalParams {
    fn from(tree: TreeParams) -> Self {
        Self {
            tree,
            ..Self::default()
        }
    }
}

/// Predicted class index and the per-class scores behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub class: usize,
    pub scores: Vec<f64>,
}

/// Argmax of per-class scores with ties broken toward the lower class.
pub fn decide(scores: Vec<f64>) -> Classification {
    Classification {
        class: argmax_lowest(&scores),
        scores,
    }
}

/// k−1 binary trees over a shared attribute schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawOrdinalModel")]
pub struct OrdinalModel {
    format_version: u32,
    ordering: ClassOrdering,
    attributes: AttributeSchema,
    params: OrdinalParams,
    trees: Vec<DecisionTree>,
}

#[derive(Deserialize)]
struct RawOrdinalModel {
    format_version: u32,
    ordering: ClassOrdering,
    attributes: AttributeSchema,
    params: OrdinalParams,
    trees: Vec<DecisionTree>,
}

impl TryFrom<RawOrdinalModel> for OrdinalModel {
    type Error = Error;

    fn try_from(raw: RawOrdinalModel) -> Result<Self> {
        if raw.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::Model(format!(
                "unsupported model format version {}",
                raw.format_version
            )));
        }
        if raw.trees.len() + 1 != raw.ordering.len() {
            return Err(Error::Model(format!(
                "{} classes need {} binary trees, found {}",
                raw.ordering.len(),
                raw.ordering.len() - 1,
                raw.trees.len()
            )));
        }
        for t in &raw.trees {
            if t.attributes() != &raw.attributes || t.ordering().len() != 2 {
                return Err(Error::Model(
                    "binary tree does not match model schema".into(),
                ));
            }
        }
        Ok(Self {
            format_version: raw.format_version,
            ordering: raw.ordering,
            attributes: raw.attributes,
            params: raw.params,
            trees: raw.trees,
        })
    }
}

/// Trains one binary tree per class threshold; the trees are independent and
/// are assembled in threshold order.
pub fn train(dataset: &Dataset, params: &OrdinalParams) -> Result<OrdinalModel> {
    params.tree.validate()?;
    if dataset.is_empty() {
        return Err(invalid("cannot train on an empty dataset"));
    }
    let k = dataset.n_classes();
    let trees = par::try_map_range(k - 1, |i| {
        let binary = derive_binary_dataset(dataset, i)?;
        tree::build(&binary, &params.tree)
    })?;
    Ok(OrdinalModel {
        format_version: MODEL_FORMAT_VERSION,
        ordering: dataset.ordering().clone(),
        attributes: dataset.schema().clone(),
        params: *params,
        trees,
    })
}

impl OrdinalModel {
    pub fn ordering(&self) -> &ClassOrdering {
        &self.ordering
    }

    pub fn attributes(&self) -> &AttributeSchema {
        &self.attributes
    }

    pub fn params(&self) -> &OrdinalParams {
        &self.params
    }

    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }

    /// Pr(class > v_{i+1}) from each binary tree.
    pub fn binary_probabilities(&self, instance: &[f64]) -> BinaryProbVector {
        BinaryProbVector(
            self.trees
                .iter()
                .map(|t| t.predict_distribution(instance, self.params.laplace)[1])
                .collect(),
        )
    }

    pub fn scores(&self, instance: &[f64]) -> Vec<f64> {
        let mut s =
            combine_probabilities(&self.binary_probabilities(instance), self.params.combine);
        if self.params.normalize {
            let total: f64 = s.iter().sum();
            if total > 0.0 {
                s.iter_mut().for_each(|v| *v /= total);
            }
        }
        s
    }

    pub fn classify(&self, instance: &[f64]) -> Classification {
        decide(self.scores(instance))
    }
}
