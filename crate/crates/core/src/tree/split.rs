//! Entropy and numeric split search.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Gains at or below this are treated as zero, and candidates closer than
/// this are treated as tied (the lower threshold wins).
pub const GAIN_EPS: f64 = 1e-12;

/// Shannon entropy, in bits, of a vector of class counts.
pub fn entropy(counts: &[f64]) -> Result<f64> {
    if counts.iter().any(|c| !c.is_finite() || *c < 0.0) {
        return Err(invalid("entropy needs finite non-negative counts"));
    }
    if !counts.iter().any(|&c| c > 0.0) {
        return Err(invalid("entropy of an all-zero count vector is undefined"));
    }
    Ok(entropy_of(counts))
}

/// Entropy without validation; zero for an empty or all-zero vector.
pub(crate) fn entropy_of(counts: &[f64]) -> f64 {
    let total: f64 = counts.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let mut h = 0.0;
    for &c in counts {
        if c > 0.0 {
            let p = c / total;
            h -= p * p.log2();
        }
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitCandidate {
    /// Instances with value `<= threshold` go left.
    pub threshold: f64,
    pub info_gain: f64,
    pub gain_ratio: f64,
}

/// Best binary split of one numeric attribute by information gain.
///
/// Candidate thresholds are midpoints between consecutive distinct sorted
/// values. Returns `None` when no candidate has positive gain.
pub fn best_numeric_split(
    values: &[f64],
    labels: &[usize],
    n_classes: usize,
) -> Option<SplitCandidate> {
    best_split_min_leaf(values, labels, n_classes, 1)
}

/// Midpoint of two sorted distinct values that still separates them.
pub(crate) fn midpoint(lo: f64, hi: f64) -> f64 {
    let mid = lo + (hi - lo) / 2.0;
    if mid < hi {
        mid
    } else {
        lo
    }
}

/// [`best_numeric_split`] restricted to splits leaving at least `min_leaf`
/// instances on each side.
pub(crate) fn best_split_min_leaf(
    values: &[f64],
    labels: &[usize],
    n_classes: usize,
    min_leaf: usize,
) -> Option<SplitCandidate> {
    debug_assert_eq!(values.len(), labels.len());
    let n = values.len();
    if n < 2 {
        return None;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    let mut total = vec![0.0; n_classes];
    for &l in labels {
        total[l] += 1.0;
    }
    let parent = entropy_of(&total);
    if parent <= 0.0 {
        return None;
    }

    let nf = n as f64;
    let mut left = vec![0.0; n_classes];
    let mut right = total.clone();
    let mut best: Option<SplitCandidate> = None;
    for j in 0..n - 1 {
        let i = order[j];
        left[labels[i]] += 1.0;
        right[labels[i]] -= 1.0;
        let (lo, hi) = (values[i], values[order[j + 1]]);
        if lo >= hi {
            continue;
        }
        let n_left = j + 1;
        let n_right = n - n_left;
        if n_left < min_leaf || n_right < min_leaf {
            continue;
        }
        let (wl, wr) = (n_left as f64 / nf, n_right as f64 / nf);
        let gain = parent - wl * entropy_of(&left) - wr * entropy_of(&right);
        if gain <= GAIN_EPS {
            continue;
        }
        if best.is_none_or(|b| gain > b.info_gain + GAIN_EPS) {
            let split_info = entropy_of(&[n_left as f64, n_right as f64]);
            best = Some(SplitCandidate {
                threshold: midpoint(lo, hi),
                info_gain: gain,
                gain_ratio: gain / split_info,
            });
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&[5.0, 5.0]).unwrap(), 1.0);
        assert_eq!(entropy(&[10.0, 0.0, 0.0, 0.0]).unwrap(), 0.0);
        assert!((entropy(&[1.0, 3.0]).unwrap() - 0.811_278_124_459_132_8).abs() < 1e-12);
        assert!(entropy(&[0.0, 0.0]).is_err());
        assert!(entropy(&[]).is_err());
        assert!(entropy(&[-1.0, 2.0]).is_err());
    }

    #[test]
    fn entropy_of_uniform_is_log2_k() {
        for k in 1..=16 {
            let h = entropy(&vec![3.0; k]).unwrap();
            assert!((h - (k as f64).log2()).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn clean_split() {
        let s = best_numeric_split(&[1.0, 2.0, 3.0, 4.0], &[0, 0, 1, 1], 2).unwrap();
        assert_eq!(s.threshold, 2.5);
        assert!((s.info_gain - 1.0).abs() < 1e-12);
        assert!((s.gain_ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn no_split_cases() {
        assert!(best_numeric_split(&[3.0, 3.0, 3.0], &[0, 1, 0], 2).is_none());
        assert!(best_numeric_split(&[1.0, 2.0], &[0, 0], 2).is_none());
        assert!(best_numeric_split(&[1.0], &[0], 2).is_none());
    }

    #[test]
    fn min_leaf_restricts_candidates() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        let l = [0, 1, 1, 1, 1];
        assert_eq!(best_split_min_leaf(&v, &l, 2, 1).unwrap().threshold, 1.5);
        let s = best_split_min_leaf(&v, &l, 2, 2).unwrap();
        assert_eq!(s.threshold, 2.5);
        assert!(best_split_min_leaf(&v, &l, 2, 3).is_none());
    }

    #[test]
    fn midpoint_of_adjacent_floats_separates() {
        let lo = 1.0_f64;
        let hi = f64::from_bits(lo.to_bits() + 1);
        let m = midpoint(lo, hi);
        assert!(lo <= m && m < hi);
    }
}
