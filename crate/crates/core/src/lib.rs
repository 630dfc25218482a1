//! Ordinal grading of non-life insurer solvency.
//!
//! The crate grades insurers into four ordered classes (Insolvency < Weak <
//! Moderate < Strong) from capital adequacy ratios and financial ratios:
//!
//! - [`dataset`]: class orderings, CAR labeling, CSV ingestion, synthetic data
//! - [`featsel`]: correlation-based feature subset selection
//! - [`tree`]: C4.5-style decision trees with pessimistic pruning
//! - [`ordinal`]: k−1 binary decomposition and probability recombination
//! - [`balance`]: resampling biased toward a uniform class distribution
//! - [`eval`]: cross-validation, splits, holdout, metrics and reports
//!
//! With the default `parallel` feature, independent work (binary trees,
//! folds, per-attribute correlations) runs on the rayon pool. Outputs are
//! identical with the feature disabled.

pub mod balance;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod featsel;
pub mod model;
pub mod ordinal;
mod par;
pub mod tree;

pub use error::{Error, Result};
pub use par::is_parallel;
