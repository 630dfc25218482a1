//! Resampling with replacement, biased toward a uniform class distribution.
//!
//! Each output instance is drawn in two stages from a ChaCha8 stream seeded
//! with `ChaCha8Rng::seed_from_u64(seed)`:
//!
//! 1. a class, by drawing `u = rng.gen::<f64>() * W` (W = total weight) and
//!    taking the first class whose cumulative weight exceeds `u`;
//! 2. an instance of that class, by `rng.gen_range(0..n_class)` over the
//!    class's instances in input order.
//!
//! Class weights are `(1 − bias) · freq_c + bias / k`, with `k` the size of
//! the class ordering.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResampleSpec {
    pub seed: u64,
    /// 0 keeps the original class distribution, 1 targets a uniform one.
    pub bias: f64,
    /// Number of instances to draw; defaults to the input size.
    #[serde(default)]
    pub output_size: Option<usize>,
}

impl ResampleSpec {
    pub fn uniform(seed: u64) -> Self {
        Self {
            seed,
            bias: 1.0,
            output_size: None,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

/// Per-class sampling weights for `dataset` under `bias`.
pub fn class_weights(dataset: &Dataset, bias: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&bias) {
        return Err(invalid(format!("bias must lie in [0, 1], got {bias}")));
    }
    if dataset.is_empty() {
        return Err(invalid("cannot resample an empty dataset"));
    }
    let n = dataset.len() as f64;
    let k = dataset.n_classes() as f64;
    let counts = dataset.class_counts();
    let mut weights = Vec::with_capacity(counts.len());
    for (c, &count) in counts.iter().enumerate() {
        let w = (1.0 - bias) * (count as f64 / n) + bias / k;
        if count == 0 && w > 0.0 {
            return Err(Error::EmptyClass(dataset.ordering().label(c).to_string()));
        }
        weights.push(w);
    }
    Ok(weights)
}

/// Draws a resampled dataset; same `(dataset, spec)` gives the same output.
pub fn resample(dataset: &Dataset, spec: &ResampleSpec) -> Result<Dataset> {
    let weights = class_weights(dataset, spec.bias)?;
    let size = spec.output_size.unwrap_or(dataset.len());
    if size == 0 {
        return Err(invalid("output size must be positive"));
    }

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); dataset.n_classes()];
    for (i, &l) in dataset.labels().iter().enumerate() {
        members[l].push(i);
    }
    let mut cumulative = Vec::with_capacity(weights.len());
    let mut acc = 0.0;
    for w in &weights {
        acc += w;
        cumulative.push(acc);
    }
    let total = acc;
    let last_present = members
        .iter()
        .rposition(|m| !m.is_empty())
        .expect("non-empty dataset");

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut picks = Vec::with_capacity(size);
    for _ in 0..size {
        let u = rng.gen::<f64>() * total;
        let class = cumulative
            .iter()
            .position(|&c| u < c)
            .filter(|&c| !members[c].is_empty())
            .unwrap_or(last_present);
        let pool = &members[class];
        picks.push(pool[rng.gen_range(0..pool.len())]);
    }
    Ok(dataset.subset(&picks))
}
