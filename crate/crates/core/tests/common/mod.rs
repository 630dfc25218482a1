//! Independent oracles and generators shared by the integration suites.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use solvency_core::dataset::{AttributeSchema, ClassOrdering, Dataset};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn generic_dataset(rows: Vec<Vec<f64>>, labels: Vec<usize>, k: usize) -> Dataset {
    let m = rows.first().map_or(0, Vec::len);
    Dataset::new(
        AttributeSchema::new((0..m).map(|i| format!("a{i}"))).unwrap(),
        ClassOrdering::new((0..k).map(|i| format!("c{i}"))).unwrap(),
        rows,
        labels,
    )
    .unwrap()
}

/// Random dataset with small-integer attribute values (so ties and duplicate
/// values occur) and labels drawn from `k` classes.
pub fn random_dataset(r: &mut ChaCha8Rng, max_n: usize, max_attrs: usize, k: usize) -> Dataset {
    let n = r.gen_range(2..=max_n);
    let m = r.gen_range(1..=max_attrs);
    let levels = r.gen_range(2..=12);
    let rows = (0..n)
        .map(|_| {
            (0..m)
                .map(|_| r.gen_range(0..levels) as f64 * 0.5)
                .collect()
        })
        .collect();
    let labels = (0..n).map(|_| r.gen_range(0..k)).collect();
    generic_dataset(rows, labels, k)
}

/// Entropy in bits written out term by term.
pub fn entropy_oracle(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    let mut h = 0.0;
    for &c in counts {
        if c > 0 {
            let p = c as f64 / total as f64;
            h -= p * p.log2();
        }
    }
    h
}

/// Exhaustive midpoint enumeration: (threshold, gain) of the best split,
/// recounting both sides from scratch for every candidate. Lower thresholds
/// win ties within 1e-12.
pub fn exhaustive_split(values: &[f64], labels: &[usize], k: usize) -> Option<(f64, f64)> {
    let mut distinct: Vec<f64> = values.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let mut parent = vec![0; k];
    for &l in labels {
        parent[l] += 1;
    }
    let h = entropy_oracle(&parent);
    let n = values.len() as f64;
    let mut best: Option<(f64, f64)> = None;
    for w in distinct.windows(2) {
        let t = (w[0] + w[1]) / 2.0;
        let mut left = vec![0; k];
        let mut right = vec![0; k];
        for (&v, &l) in values.iter().zip(labels) {
            if v <= t {
                left[l] += 1;
            } else {
                right[l] += 1;
            }
        }
        let nl: usize = left.iter().sum();
        let nr: usize = right.iter().sum();
        let gain =
            h - nl as f64 / n * entropy_oracle(&left) - nr as f64 / n * entropy_oracle(&right);
        if gain > 1e-12 && best.is_none_or(|(_, g)| gain > g + 1e-12) {
            best = Some((t, gain));
        }
    }
    best
}

/// Per-class scores written directly from the three recombination formulas.
pub fn combine_oracle(bp: &[f64]) -> Vec<f64> {
    let k = bp.len() + 1;
    (1..=k)
        .map(|i| {
            if i == 1 {
                1.0 - bp[0]
            } else if i == k {
                bp[k - 2]
            } else {
                f64::max(bp[i - 2] - bp[i - 1], 0.0)
            }
        })
        .collect()
}

/// Symmetric uncertainty from an explicit contingency table.
pub fn su_oracle(x: &[usize], y: &[usize]) -> f64 {
    let nx = x.iter().max().unwrap() + 1;
    let ny = y.iter().max().unwrap() + 1;
    let mut table = vec![vec![0usize; ny]; nx];
    for (&a, &b) in x.iter().zip(y) {
        table[a][b] += 1;
    }
    let n = x.len() as f64;
    let row: Vec<usize> = table.iter().map(|r| r.iter().sum()).collect();
    let col: Vec<usize> = (0..ny).map(|j| table.iter().map(|r| r[j]).sum()).collect();
    let hx = entropy_oracle(&row);
    let hy = entropy_oracle(&col);
    let mut mi = 0.0;
    for i in 0..nx {
        for j in 0..ny {
            let c = table[i][j];
            if c > 0 {
                let pxy = c as f64 / n;
                mi += pxy * (pxy / (row[i] as f64 / n * col[j] as f64 / n)).log2();
            }
        }
    }
    if hx + hy == 0.0 {
        0.0
    } else {
        2.0 * mi / (hx + hy)
    }
}

/// CFS merit computed from the oracle SU.
pub fn merit_oracle(subset: &[usize], bins: &[Vec<usize>], labels: &[usize]) -> f64 {
    let k = subset.len() as f64;
    if subset.is_empty() {
        return 0.0;
    }
    let rcf = subset
        .iter()
        .map(|&a| su_oracle(&bins[a], labels))
        .sum::<f64>()
        / k;
    let mut rff = 0.0;
    let mut pairs = 0.0;
    for i in 0..subset.len() {
        for j in i + 1..subset.len() {
            rff += su_oracle(&bins[subset[i]], &bins[subset[j]]);
            pairs += 1.0;
        }
    }
    let rff = if pairs > 0.0 { rff / pairs } else { 0.0 };
    k * rcf / (k + k * (k - 1.0) * rff).sqrt()
}

/// Best merit over all non-empty subsets.
pub fn exhaustive_best_merit(bins: &[Vec<usize>], labels: &[usize]) -> f64 {
    let m = bins.len();
    (1u32..(1 << m))
        .map(|mask| {
            let subset: Vec<usize> = (0..m).filter(|&a| mask & (1 << a) != 0).collect();
            merit_oracle(&subset, bins, labels)
        })
        .fold(0.0, f64::max)
}
