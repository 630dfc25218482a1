//! Correlation-based feature subset selection.
//!
//! Attributes are discretized into equal-frequency bins, correlations are
//! measured by symmetric uncertainty, and subsets are scored with the CFS
//! merit
//!
//! ```text
//! merit(S) = k · r̄_cf / sqrt(k + k(k−1) · r̄_ff)
//! ```
//!
//! where `r̄_cf` is the mean attribute–class correlation and `r̄_ff` the mean
//! pairwise attribute correlation over the `k` members of `S`. A greedy
//! forward search adds attributes while the merit improves.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{invalid, Result};
use crate::par;
use crate::tree::split::entropy_of;

pub const DEFAULT_BINS: usize = 10;

/// Minimum merit increase accepted by the forward search.
pub const MERIT_EPS: f64 = 1e-12;

/// Equal-frequency discretization of every attribute of a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedView {
    /// Ascending cut points per attribute.
    pub cut_points: Vec<Vec<f64>>,
    /// Bin index per attribute (outer) and instance (inner).
    pub bins: Vec<Vec<usize>>,
}

impl DiscretizedView {
    pub fn n_attributes(&self) -> usize {
        self.cut_points.len()
    }
}

/// Bin of `value`: the number of cut points strictly below it.
pub fn bin_of(cuts: &[f64], value: f64) -> usize {
    cuts.partition_point(|&c| c < value)
}

/// Cut points splitting `values` into at most `bins` equal-frequency bins.
///
/// Each ideal cut position `j·n/bins` snaps to the nearest boundary between
/// distinct sorted values (the lower one on a tie), so equal values always
/// share a bin.
pub fn equal_frequency_cuts(values: &[f64], bins: usize) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    // positions p with sorted[p-1] < sorted[p]
    let boundaries: Vec<usize> = (1..n).filter(|&p| sorted[p - 1] < sorted[p]).collect();
    if boundaries.is_empty() {
        return Vec::new();
    }
    let mut chosen: Vec<usize> = Vec::new();
    for j in 1..bins {
        let target = j as f64 * n as f64 / bins as f64;
        let at = boundaries.partition_point(|&p| (p as f64) < target);
        let pick = match (at.checked_sub(1).map(|i| boundaries[i]), boundaries.get(at)) {
            (Some(lo), Some(&hi)) => {
                if target - lo as f64 <= hi as f64 - target {
                    lo
                } else {
                    hi
                }
            }
            (Some(lo), None) => lo,
            (None, Some(&hi)) => hi,
            (None, None) => unreachable!(),
        };
        if chosen.last() != Some(&pick) && !chosen.contains(&pick) {
            chosen.push(pick);
        }
    }
    chosen.sort_unstable();
    chosen
        .into_iter()
        .map(|p| crate::tree::split::midpoint(sorted[p - 1], sorted[p]))
        .collect()
}

pub fn discretize(dataset: &Dataset, bins: usize) -> Result<DiscretizedView> {
    if bins < 2 {
        return Err(invalid(format!("need at least 2 bins, got {bins}")));
    }
    let per_attr = par::map_range(dataset.n_attributes(), |a| {
        let column = dataset.column(a);
        let cuts = equal_frequency_cuts(&column, bins);
        let assigned = column.iter().map(|&v| bin_of(&cuts, v)).collect();
        (cuts, assigned)
    });
    let (cut_points, bins) = per_attr.into_iter().unzip();
    Ok(DiscretizedView { cut_points, bins })
}

fn counts_of(column: &[usize]) -> Vec<f64> {
    let size = column.iter().max().map_or(0, |m| m + 1);
    let mut counts = vec![0.0; size];
    for &v in column {
        counts[v] += 1.0;
    }
    counts
}

/// Symmetric uncertainty `2·I(X;Y) / (H(X) + H(Y))`, 0 when both are constant.
pub fn symmetric_uncertainty(x: &[usize], y: &[usize]) -> f64 {
    assert_eq!(x.len(), y.len(), "columns must have equal length");
    if x.is_empty() {
        return 0.0;
    }
    let hx = entropy_of(&counts_of(x));
    let hy = entropy_of(&counts_of(y));
    if hx + hy <= 0.0 {
        return 0.0;
    }
    let width = y.iter().max().map_or(0, |m| m + 1);
    let joint: Vec<usize> = x.iter().zip(y).map(|(&a, &b)| a * width + b).collect();
    let hxy = entropy_of(&counts_of(&joint));
    let mi = hx + hy - hxy;
    (2.0 * mi / (hx + hy)).clamp(0.0, 1.0)
}

/// Caches attribute–class and attribute–attribute correlations.
#[derive(Debug, Clone)]
pub struct CfsEvaluator {
    class_corr: Vec<f64>,
    pair_corr: Vec<Vec<f64>>,
}

impl CfsEvaluator {
    pub fn new(view: &DiscretizedView, labels: &[usize]) -> Self {
        let m = view.n_attributes();
        let class_corr = par::map_range(m, |a| symmetric_uncertainty(&view.bins[a], labels));
        let upper = par::map_range(m, |a| {
            (a + 1..m)
                .map(|b| symmetric_uncertainty(&view.bins[a], &view.bins[b]))
                .collect::<Vec<_>>()
        });
        let mut pair_corr = vec![vec![1.0; m]; m];
        for (a, row) in upper.into_iter().enumerate() {
            for (off, v) in row.into_iter().enumerate() {
                let b = a + 1 + off;
                pair_corr[a][b] = v;
                pair_corr[b][a] = v;
            }
        }
        Self {
            class_corr,
            pair_corr,
        }
    }

    pub fn n_attributes(&self) -> usize {
        self.class_corr.len()
    }

    pub fn class_correlation(&self, a: usize) -> f64 {
        self.class_corr[a]
    }

    pub fn merit(&self, subset: &[usize]) -> f64 {
        let k = subset.len();
        if k == 0 {
            return 0.0;
        }
        let kf = k as f64;
        let r_cf = subset.iter().map(|&a| self.class_corr[a]).sum::<f64>() / kf;
        let mut ff_sum = 0.0;
        for (i, &a) in subset.iter().enumerate() {
            for &b in &subset[i + 1..] {
                ff_sum += self.pair_corr[a][b];
            }
        }
        let pairs = kf * (kf - 1.0) / 2.0;
        let r_ff = if k > 1 { ff_sum / pairs } else { 0.0 };
        let denom = (kf + kf * (kf - 1.0) * r_ff).sqrt();
        if denom <= 0.0 {
            0.0
        } else {
            kf * r_cf / denom
        }
    }
}

/// CFS merit of `subset`; the empty subset scores 0.
pub fn cfs_merit(subset: &[usize], view: &DiscretizedView, labels: &[usize]) -> f64 {
    CfsEvaluator::new(view, labels).merit(subset)
}

/// Result of a forward search: attributes in the order added and the merit
/// after each addition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub attributes: Vec<usize>,
    pub merits: Vec<f64>,
}

impl Selection {
    pub fn merit(&self) -> f64 {
        self.merits.last().copied().unwrap_or(0.0)
    }
}

/// Forward search from the empty set; each step adds the attribute with the
/// largest merit (lowest index on ties) and the search stops when no
/// addition raises the merit by more than [`MERIT_EPS`].
pub fn greedy_search(eval: &CfsEvaluator) -> Selection {
    let m = eval.n_attributes();
    let mut chosen: Vec<usize> = Vec::new();
    let mut merits = Vec::new();
    let mut current = 0.0;
    loop {
        let mut best: Option<(usize, f64)> = None;
        for a in (0..m).filter(|a| !chosen.contains(a)) {
            let mut trial = chosen.clone();
            trial.push(a);
            let merit = eval.merit(&trial);
            if best.is_none_or(|(_, b)| merit > b) {
                best = Some((a, merit));
            }
        }
        match best {
            Some((a, merit)) if merit > current + MERIT_EPS => {
                chosen.push(a);
                merits.push(merit);
                current = merit;
            }
            _ => break,
        }
    }
    Selection {
        attributes: chosen,
        merits,
    }
}

/// Discretizes `dataset` and runs the greedy forward CFS search.
pub fn greedy_stepwise(dataset: &Dataset, bins: usize) -> Result<Selection> {
    if dataset.is_empty() {
        return Err(invalid("cannot select features on an empty dataset"));
    }
    let view = discretize(dataset, bins)?;
    Ok(greedy_search(&CfsEvaluator::new(&view, dataset.labels())))
}
