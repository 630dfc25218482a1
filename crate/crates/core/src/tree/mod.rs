//! C4.5-style decision trees over numeric attributes.
//!
//! Splits are binary (`value <= threshold` goes left). At each node the
//! learner finds the information-gain-maximizing threshold per attribute,
//! keeps the attributes whose gain is at least the mean positive gain, and
//! among those picks the highest gain ratio. Trees are grown until nodes are
//! pure, too small to split, or no split has positive gain, then optionally
//! pruned by pessimistic subtree replacement.

mod json;
mod prune;
pub(crate) mod split;

use serde::{Deserialize, Serialize};

use crate::dataset::{AttributeSchema, ClassOrdering, Dataset};
use crate::error::{invalid, Result};

pub use json::{NodeDoc, TreeDoc};
pub use prune::{pessimistic_errors, prune_pessimistic};
pub use split::{best_numeric_split, entropy, SplitCandidate, GAIN_EPS};

pub(crate) use split::best_split_min_leaf;

/// Training class counts at a node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassDistribution {
    counts: Vec<f64>,
}

impl ClassDistribution {
    pub fn new(counts: Vec<f64>) -> Self {
        Self { counts }
    }

    pub(crate) fn from_labels(labels: impl IntoIterator<Item = usize>, n_classes: usize) -> Self {
        let mut counts = vec![0.0; n_classes];
        for l in labels {
            counts[l] += 1.0;
        }
        Self { counts }
    }

    pub fn counts(&self) -> &[f64] {
        &self.counts
    }

    pub fn total(&self) -> f64 {
        self.counts.iter().sum()
    }

    /// Index of the largest count; ties go to the lowest index.
    pub fn majority(&self) -> usize {
        argmax_lowest(&self.counts)
    }

    /// Training errors made by predicting the majority class.
    pub fn errors(&self) -> f64 {
        self.total() - self.counts[self.majority()]
    }

    pub fn is_pure(&self) -> bool {
        self.counts.iter().filter(|&&c| c > 0.0).count() <= 1
    }

    /// Relative frequencies, or add-one smoothed when `laplace` is set. An
    /// empty distribution yields the uniform vector.
    pub fn probabilities(&self, laplace: bool) -> Vec<f64> {
        let k = self.counts.len() as f64;
        let total = self.total();
        if laplace {
            self.counts
                .iter()
                .map(|c| (c + 1.0) / (total + k))
                .collect()
        } else if total > 0.0 {
            self.counts.iter().map(|c| c / total).collect()
        } else {
            vec![1.0 / k; self.counts.len()]
        }
    }
}

/// Index of the maximum entry, ties broken toward the lowest index.
pub fn argmax_lowest(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Leaf {
        distribution: ClassDistribution,
    },
    Split {
        attribute: usize,
        threshold: f64,
        /// Training counts reaching this node.
        distribution: ClassDistribution,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

impl TreeNode {
    pub fn distribution(&self) -> &ClassDistribution {
        match self {
            TreeNode::Leaf { distribution } | TreeNode::Split { distribution, .. } => distribution,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, TreeNode::Leaf { .. })
    }

    pub fn n_nodes(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Split { left, right, .. } => 1 + left.n_nodes() + right.n_nodes(),
        }
    }

    pub fn n_leaves(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Split { left, right, .. } => left.n_leaves() + right.n_leaves(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    /// Leaf reached by `instance`.
    pub fn route(&self, instance: &[f64]) -> &ClassDistribution {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { distribution } => return distribution,
                TreeNode::Split {
                    attribute,
                    threshold,
                    left,
                    right,
                    ..
                } => {
                    node = if instance[*attribute] <= *threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Pruning {
    None,
    /// Subtree replacement using an upper confidence bound on the error rate.
    Pessimistic {
        confidence: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    /// Minimum instances on each side of a split.
    pub min_leaf: usize,
    pub pruning: Pruning,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            min_leaf: 2,
            pruning: Pruning::Pessimistic { confidence: 0.25 },
        }
    }
}

impl TreeParams {
    /// Fully grown tree with single-instance leaves allowed.
    pub fn unpruned() -> Self {
        Self {
            min_leaf: 1,
            pruning: Pruning::None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_leaf == 0 {
            return Err(invalid("min_leaf must be at least 1"));
        }
        if let Pruning::Pessimistic { confidence } = self.pruning {
            if !(confidence > 0.0 && confidence < 1.0) {
                return Err(invalid(format!(
                    "pruning confidence must lie in (0, 1), got {confidence}"
                )));
            }
        }
        Ok(())
    }
}

/// A trained tree together with the attribute and class names it was built on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "TreeDoc", try_from = "TreeDoc")]
pub struct DecisionTree {
    attributes: AttributeSchema,
    ordering: ClassOrdering,
    root: TreeNode,
}

impl DecisionTree {
    pub fn from_parts(
        attributes: AttributeSchema,
        ordering: ClassOrdering,
        root: TreeNode,
    ) -> Self {
        Self {
            attributes,
            ordering,
            root,
        }
    }

    pub fn attributes(&self) -> &AttributeSchema {
        &self.attributes
    }

    pub fn ordering(&self) -> &ClassOrdering {
        &self.ordering
    }

    pub fn root(&self) -> &TreeNode {
        &self.root
    }

    pub fn n_nodes(&self) -> usize {
        self.root.n_nodes()
    }

    pub fn n_leaves(&self) -> usize {
        self.root.n_leaves()
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    /// Class probability vector for an instance.
    pub fn predict_distribution(&self, instance: &[f64], laplace: bool) -> Vec<f64> {
        self.root.route(instance).probabilities(laplace)
    }

    /// Most probable class index, ties to the lowest index.
    pub fn predict(&self, instance: &[f64]) -> usize {
        argmax_lowest(&self.predict_distribution(instance, false))
    }

    /// Applies pessimistic pruning with the given confidence.
    pub fn pruned(self, confidence: f64) -> Self {
        Self {
            root: prune_pessimistic(self.root, confidence),
            ..self
        }
    }
}

/// Induces a tree from `dataset`.
pub fn build(dataset: &Dataset, params: &TreeParams) -> Result<DecisionTree> {
    params.validate()?;
    if dataset.is_empty() {
        return Err(invalid("cannot build a tree from an empty dataset"));
    }
    let grower = Grower {
        data: dataset,
        min_leaf: params.min_leaf,
    };
    let mut root = grower.grow((0..dataset.len()).collect());
    if let Pruning::Pessimistic { confidence } = params.pruning {
        root = prune_pessimistic(root, confidence);
    }
    Ok(DecisionTree {
        attributes: dataset.schema().clone(),
        ordering: dataset.ordering().clone(),
        root,
    })
}

struct Grower<'a> {
    data: &'a Dataset,
    min_leaf: usize,
}

impl Grower<'_> {
    fn grow(&self, idx: Vec<usize>) -> TreeNode {
        let labels: Vec<usize> = idx.iter().map(|&i| self.data.label(i)).collect();
        let distribution =
            ClassDistribution::from_labels(labels.iter().copied(), self.data.n_classes());
        if distribution.is_pure() || idx.len() < 2 * self.min_leaf {
            return TreeNode::Leaf { distribution };
        }
        let Some((attribute, threshold)) = self.choose_split(&idx, &labels) else {
            return TreeNode::Leaf { distribution };
        };
        let (left, right): (Vec<usize>, Vec<usize>) = idx
            .into_iter()
            .partition(|&i| self.data.row(i)[attribute] <= threshold);
        TreeNode::Split {
            attribute,
            threshold,
            distribution,
            left: Box::new(self.grow(left)),
            right: Box::new(self.grow(right)),
        }
    }

    fn choose_split(&self, idx: &[usize], labels: &[usize]) -> Option<(usize, f64)> {
        let k = self.data.n_classes();
        let candidates: Vec<(usize, SplitCandidate)> = (0..self.data.n_attributes())
            .filter_map(|a| {
                let values: Vec<f64> = idx.iter().map(|&i| self.data.row(i)[a]).collect();
                best_split_min_leaf(&values, labels, k, self.min_leaf).map(|c| (a, c))
            })
            .collect();
        if candidates.is_empty() {
            return None;
        }
        let mean_gain =
            candidates.iter().map(|(_, c)| c.info_gain).sum::<f64>() / candidates.len() as f64;
        let mut best: Option<(usize, SplitCandidate)> = None;
        for &(a, c) in &candidates {
            if c.info_gain < mean_gain - GAIN_EPS {
                continue;
            }
            if best.is_none_or(|(_, b)| c.gain_ratio > b.gain_ratio + GAIN_EPS) {
                best = Some((a, c));
            }
        }
        best.map(|(a, c)| (a, c.threshold))
    }
}
