//! Serializable trained classifiers: the ordinal model and the plain
//! multiclass tree baseline, behind one envelope.

use serde::{Deserialize, Serialize};

use crate::dataset::{AttributeSchema, ClassOrdering, Dataset};
use crate::error::{invalid, Error, Result};
use crate::ordinal::{decide, Classification, OrdinalModel, OrdinalParams, MODEL_FORMAT_VERSION};
use crate::tree::{self, DecisionTree};

/// Single multiclass tree used as the non-ordinal baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MulticlassModel {
    format_version: u32,
    ordering: ClassOrdering,
    attributes: AttributeSchema,
    params: OrdinalParams,
    tree: DecisionTree,
}

impl MulticlassModel {
    pub fn train(dataset: &Dataset, params: &OrdinalParams) -> Result<Self> {
        let tree = tree::build(dataset, &params.tree)?;
        Ok(Self {
            format_version: MODEL_FORMAT_VERSION,
            ordering: dataset.ordering().clone(),
            attributes: dataset.schema().clone(),
            params: *params,
            tree,
        })
    }

    pub fn tree(&self) -> &DecisionTree {
        &self.tree
    }

    pub fn classify(&self, instance: &[f64]) -> Classification {
        decide(
            self.tree
                .predict_distribution(instance, self.params.laplace),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    Ordinal(OrdinalModel),
    Multiclass(MulticlassModel),
}

impl Model {
    pub fn ordering(&self) -> &ClassOrdering {
        match self {
            Model::Ordinal(m) => m.ordering(),
            Model::Multiclass(m) => &m.ordering,
        }
    }

    pub fn attributes(&self) -> &AttributeSchema {
        match self {
            Model::Ordinal(m) => m.attributes(),
            Model::Multiclass(m) => &m.attributes,
        }
    }

    pub fn trees(&self) -> Vec<&DecisionTree> {
        match self {
            Model::Ordinal(m) => m.trees().iter().collect(),
            Model::Multiclass(m) => vec![&m.tree],
        }
    }

    /// Scores and class for an instance laid out in [`Model::attributes`] order.
    pub fn classify(&self, instance: &[f64]) -> Classification {
        match self {
            Model::Ordinal(m) => m.classify(instance),
            Model::Multiclass(m) => m.classify(instance),
        }
    }

    /// Positions of the model's attributes within `schema`.
    pub fn align(&self, schema: &AttributeSchema) -> Result<Vec<usize>> {
        self.attributes()
            .names()
            .iter()
            .map(|name| {
                schema
                    .index_of(name)
                    .ok_or_else(|| Error::Schema(format!("input lacks model attribute `{name}`")))
            })
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: Model = serde_json::from_str(text)?;
        if let Model::Multiclass(m) = &model {
            if m.format_version != MODEL_FORMAT_VERSION {
                return Err(invalid(format!(
                    "unsupported model format version {}",
                    m.format_version
                )));
            }
            if m.tree.attributes() != &m.attributes || m.tree.ordering() != &m.ordering {
                return Err(Error::Model("tree does not match model schema".into()));
            }
        }
        Ok(model)
    }
}
