//! Pessimistic (upper-confidence-bound) subtree replacement.

use statrs::distribution::{ContinuousCDF, Normal};

use super::{ClassDistribution, TreeNode};

/// Slack when comparing a collapsed leaf to the subtree it replaces, so that
/// exactly equal estimates collapse despite rounding.
const PRUNE_EPS: f64 = 1e-9;

/// Standard normal quantile for the one-sided `confidence` level.
fn z_for(confidence: f64) -> f64 {
    Normal::new(0.0, 1.0)
        .expect("unit normal")
        .inverse_cdf(1.0 - confidence)
}

/// Expected errors at a node covering `n` instances with `e` observed errors:
/// `n` times the normal-approximation upper bound on the binomial error rate,
/// with a half-instance continuity correction.
pub fn pessimistic_errors(e: f64, n: f64, confidence: f64) -> f64 {
    upper_errors(e, n, z_for(confidence))
}

fn upper_errors(e: f64, n: f64, z: f64) -> f64 {
    if n <= 0.0 {
        return 0.0;
    }
    if e + 0.5 >= n {
        return n;
    }
    let f = (e + 0.5) / n;
    let z2 = z * z;
    let r =
        (f + z2 / (2.0 * n) + z * (f / n - f * f / n + z2 / (4.0 * n * n)).sqrt()) / (1.0 + z2 / n);
    r * n
}

fn leaf_errors(d: &ClassDistribution, z: f64) -> f64 {
    upper_errors(d.errors(), d.total(), z)
}

/// Bottom-up: a split becomes a leaf when the leaf's estimated errors do not
/// exceed the summed estimates of its (already pruned) children.
pub fn prune_pessimistic(node: TreeNode, confidence: f64) -> TreeNode {
    prune(node, z_for(confidence)).0
}

fn prune(node: TreeNode, z: f64) -> (TreeNode, f64) {
    match node {
        TreeNode::Leaf { distribution } => {
            let est = leaf_errors(&distribution, z);
            (TreeNode::Leaf { distribution }, est)
        }
        TreeNode::Split {
            attribute,
            threshold,
            distribution,
            left,
            right,
        } => {
            let (left, el) = prune(*left, z);
            let (right, er) = prune(*right, z);
            let subtree = el + er;
            let as_leaf = leaf_errors(&distribution, z);
            if as_leaf <= subtree + PRUNE_EPS {
                (TreeNode::Leaf { distribution }, as_leaf)
            } else {
                (
                    TreeNode::Split {
                        attribute,
                        threshold,
                        distribution,
                        left: Box::new(left),
                        right: Box::new(right),
                    },
                    subtree,
                )
            }
        }
    }
}
