//! Deterministic synthetic insurer data.
//!
//! Each instance draws a latent CAR uniformly inside its grade's interval
//! (Insolvency floored at 0.2, Strong capped at 3.0) and emits the thirteen
//! ratios as fixed affine functions of that CAR plus Gaussian noise.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{
    label_from_car, AttributeSchema, ClassOrdering, CompanyRecord, Dataset, SolvencyClass,
};
use crate::error::{invalid, Result};

/// Class counts (Insolvency, Weak, Moderate, Strong) of the 2000-2008 training years.
pub const REFERENCE_COUNTS: [usize; 4] = [45, 13, 17, 541];

const CAR_MIN: f64 = 0.2;
const CAR_MAX: f64 = 3.0;

/// (intercept, slope) of each ratio V1..V13 against CAR. V7, V10 and V13
/// carry no signal.
const RATIO_MODEL: [(f64, f64); 13] = [
    (3.0, -1.0),
    (0.0, 4.0),
    (0.5, 0.8),
    (1.2, -0.4),
    (0.6, -0.2),
    (-0.3, 0.25),
    (0.04, 0.0),
    (2.5, -0.6),
    (-0.08, 0.06),
    (0.3, 0.0),
    (1.8, -0.7),
    (0.1, 3.0),
    (0.55, 0.0),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    /// Instances per class, ascending (Insolvency first).
    pub counts: Vec<usize>,
    pub seed: u64,
    /// Standard deviation of the additive Gaussian noise on every ratio.
    pub noise: f64,
}

impl SynthSpec {
    pub fn reference(seed: u64, noise: f64) -> Self {
        Self {
            counts: REFERENCE_COUNTS.to_vec(),
            seed,
            noise,
        }
    }
}

fn car_interval(class: SolvencyClass) -> (f64, f64) {
    match class {
        SolvencyClass::Insolvency => (CAR_MIN, super::CAR_WEAK),
        SolvencyClass::Weak => (super::CAR_WEAK, super::CAR_MODERATE),
        SolvencyClass::Moderate => (super::CAR_MODERATE, super::CAR_STRONG),
        SolvencyClass::Strong => (super::CAR_STRONG, CAR_MAX),
    }
}

/// Generates company records, shuffled, with `company_id`, `year` and `car` set.
pub fn synth_records(spec: &SynthSpec) -> Result<Vec<CompanyRecord>> {
    if spec.counts.len() != SolvencyClass::ALL.len() {
        return Err(invalid(format!(
            "expected {} class counts, got {}",
            SolvencyClass::ALL.len(),
            spec.counts.len()
        )));
    }
    if spec.counts.iter().all(|&c| c == 0) {
        return Err(invalid("at least one class count must be positive"));
    }
    if !spec.noise.is_finite() || spec.noise < 0.0 {
        return Err(invalid(format!(
            "noise must be finite and >= 0, got {}",
            spec.noise
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let noise = Normal::new(0.0, spec.noise).map_err(|e| invalid(e.to_string()))?;

    let mut classes: Vec<SolvencyClass> = SolvencyClass::ALL
        .iter()
        .zip(&spec.counts)
        .flat_map(|(&c, &n)| std::iter::repeat_n(c, n))
        .collect();
    classes.shuffle(&mut rng);

    let mut records = Vec::with_capacity(classes.len());
    for (i, class) in classes.into_iter().enumerate() {
        let (lo, hi) = car_interval(class);
        let car = if class == SolvencyClass::Strong {
            rng.gen_range(lo..=hi)
        } else {
            rng.gen_range(lo..hi)
        };
        debug_assert_eq!(label_from_car(car).ok(), Some(class));
        let ratios = RATIO_MODEL
            .iter()
            .map(|&(a, b)| {
                let eps = if spec.noise > 0.0 {
                    noise.sample(&mut rng)
                } else {
                    0.0
                };
                a + b * car + eps
            })
            .collect();
        records.push(CompanyRecord {
            company_id: Some(format!("S{:04}", i + 1)),
            year: Some(2000 + (i % 9) as i32),
            ratios,
            car: Some(car),
            tca: None,
            tcr: None,
            label: Some(class),
        });
    }
    Ok(records)
}

/// Generates a labeled V1..V13 dataset. Identical specs give identical datasets.
pub fn synth_generate(spec: &SynthSpec) -> Result<Dataset> {
    let records = synth_records(spec)?;
    let labels = records
        .iter()
        .map(|r| r.label.expect("synthetic records are labeled").index())
        .collect();
    Dataset::new(
        AttributeSchema::ratios_v1_v13(),
        ClassOrdering::solvency(),
        records.into_iter().map(|r| r.ratios).collect(),
        labels,
    )
}
