//! Self-describing JSON form of a tree.
//!
//! Nodes are tagged by `kind` and name their attribute. Thresholds are
//! written as the shortest decimal that parses back to the identical `f64`.

use serde::{Deserialize, Serialize};

use super::{ClassDistribution, DecisionTree, TreeNode};
use crate::dataset::{AttributeSchema, ClassOrdering};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NodeDoc {
    Split {
        attribute: String,
        threshold: f64,
        counts: Vec<f64>,
        left: Box<NodeDoc>,
        right: Box<NodeDoc>,
    },
    Leaf {
        counts: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeDoc {
    pub attributes: AttributeSchema,
    pub classes: ClassOrdering,
    pub root: NodeDoc,
}

impl From<DecisionTree> for TreeDoc {
    fn from(t: DecisionTree) -> Self {
        fn node(n: &TreeNode, attrs: &AttributeSchema) -> NodeDoc {
            match n {
                TreeNode::Leaf { distribution } => NodeDoc::Leaf {
                    counts: distribution.counts().to_vec(),
                },
                TreeNode::Split {
                    attribute,
                    threshold,
                    distribution,
                    left,
                    right,
                } => NodeDoc::Split {
                    attribute: attrs.name(*attribute).to_string(),
                    threshold: *threshold,
                    counts: distribution.counts().to_vec(),
                    left: Box::new(node(left, attrs)),
                    right: Box::new(node(right, attrs)),
                },
            }
        }
        let root = node(&t.root, &t.attributes);
        TreeDoc {
            attributes: t.attributes,
            classes: t.ordering,
            root,
        }
    }
}

impl TryFrom<TreeDoc> for DecisionTree {
    type Error = Error;

    fn try_from(doc: TreeDoc) -> Result<Self> {
        fn counts(c: Vec<f64>, k: usize) -> Result<ClassDistribution> {
            if c.len() != k {
                return Err(Error::Model(format!(
                    "node has {} counts, expected {k}",
                    c.len()
                )));
            }
            if c.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::Model(
                    "node counts must be finite and non-negative".into(),
                ));
            }
            Ok(ClassDistribution::new(c))
        }
        fn node(n: NodeDoc, attrs: &AttributeSchema, k: usize) -> Result<TreeNode> {
            Ok(match n {
                NodeDoc::Leaf { counts: c } => TreeNode::Leaf {
                    distribution: counts(c, k)?,
                },
                NodeDoc::Split {
                    attribute,
                    threshold,
                    counts: c,
                    left,
                    right,
                } => {
                    let index = attrs
                        .index_of(&attribute)
                        .ok_or_else(|| Error::Model(format!("unknown attribute `{attribute}`")))?;
                    if !threshold.is_finite() {
                        return Err(Error::Model("split threshold must be finite".into()));
                    }
                    TreeNode::Split {
                        attribute: index,
                        threshold,
                        distribution: counts(c, k)?,
                        left: Box::new(node(*left, attrs, k)?),
                        right: Box::new(node(*right, attrs, k)?),
                    }
                }
            })
        }
        let root = node(doc.root, &doc.attributes, doc.classes.len())?;
        Ok(DecisionTree::from_parts(doc.attributes, doc.classes, root))
    }
}
