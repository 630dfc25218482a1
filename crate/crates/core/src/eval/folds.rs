//! Stratified partitioning for cross-validation and percentage splits.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};

fn shuffled_members(labels: &[usize], n_classes: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (i, &l) in labels.iter().enumerate() {
        members[l].push(i);
    }
    for m in &mut members {
        m.shuffle(rng);
    }
    members
}

/// Splits instance indices into `k` disjoint folds.
///
/// Each class's instances are shuffled and the classes are laid end to end,
/// lowest class first; position `p` of that sequence goes to fold `p mod k`.
/// Per-class counts and fold sizes therefore differ by at most one. Each
/// fold's indices are returned in ascending order.
pub fn stratified_folds(labels: &[usize], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(invalid(format!("need at least 2 folds, got {k}")));
    }
    if k > labels.len() {
        return Err(invalid(format!(
            "cannot make {k} folds from {} instances",
            labels.len()
        )));
    }
    let n_classes = labels.iter().max().map_or(0, |m| m + 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    for (p, i) in shuffled_members(labels, n_classes, &mut rng)
        .into_iter()
        .flatten()
        .enumerate()
    {
        folds[p % k].push(i);
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}

/// Number of training instances for a split fraction.
pub fn train_size(n: usize, train_fraction: f64) -> usize {
    ((train_fraction * n as f64) + 1e-9).floor() as usize
}

/// Stratified shuffle split into (train, test) index lists, both ascending.
///
/// The training size is `floor(fraction · n)`. Each class contributes
/// `floor(fraction · n_c)` training instances, and the remaining slots go to
/// the classes with the largest fractional remainders (lowest class first on
/// ties).
pub fn stratified_split(
    labels: &[usize],
    train_fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(invalid(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    let n = labels.len();
    let n_train = train_size(n, train_fraction);
    if n_train == 0 || n_train == n {
        return Err(invalid(format!(
            "a {train_fraction} split of {n} instances leaves one side empty"
        )));
    }
    let n_classes = labels.iter().max().map_or(0, |m| m + 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let members = shuffled_members(labels, n_classes, &mut rng);

    let mut quota: Vec<usize> = Vec::with_capacity(n_classes);
    let mut remainders: Vec<(f64, usize)> = Vec::new();
    for (c, m) in members.iter().enumerate() {
        let exact = train_fraction * m.len() as f64;
        let q = (exact + 1e-9).floor() as usize;
        quota.push(q.min(m.len()));
        if q < m.len() {
            remainders.push((exact - q as f64, c));
        }
    }
    let mut missing = n_train.saturating_sub(quota.iter().sum());
    remainders.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    for &(_, c) in &remainders {
        if missing == 0 {
            break;
        }
        quota[c] += 1;
        missing -= 1;
    }

    let mut train = Vec::with_capacity(n_train);
    let mut test = Vec::with_capacity(n - n_train);
    for (m, &q) in members.iter().zip(&quota) {
        train.extend_from_slice(&m[..q]);
        test.extend_from_slice(&m[q..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}
