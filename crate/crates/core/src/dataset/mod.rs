//! Data model for insurer solvency grading.
//!
//! A [`Dataset`] is an immutable numeric matrix (one row per company-year,
//! one column per financial ratio) with one ordinal label per row. Labels are
//! indices into a [`ClassOrdering`], ascending from the worst grade.

mod csv_io;
mod synth;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub use csv_io::{load_csv, load_records, write_csv, LabelMode, RecordTable};
pub use synth::{synth_generate, synth_records, SynthSpec, REFERENCE_COUNTS};

/// Ordered list of class names, index 0 being the lowest class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct ClassOrdering {
    labels: Vec<String>,
}

impl ClassOrdering {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() < 2 {
            return Err(invalid("a class ordering needs at least 2 labels"));
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].iter().any(|b| b.eq_ignore_ascii_case(a)) {
                return Err(invalid(format!("duplicate class label `{a}`")));
            }
        }
        Ok(Self { labels })
    }

    /// The four solvency grades, ascending: Insolvency, Weak, Moderate, Strong.
    pub fn solvency() -> Self {
        Self {
            labels: SolvencyClass::ALL
                .iter()
                .map(|c| c.name().to_string())
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    /// Case-insensitive lookup of a label.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        let label = label.trim();
        self.labels
            .iter()
            .position(|l| l.eq_ignore_ascii_case(label))
    }

    /// True when this ordering is the canonical solvency scale.
    pub fn is_solvency(&self) -> bool {
        *self == Self::solvency()
    }
}

impl TryFrom<Vec<String>> for ClassOrdering {
    type Error = crate::Error;

    fn try_from(labels: Vec<String>) -> Result<Self> {
        Self::new(labels)
    }
}

impl From<ClassOrdering> for Vec<String> {
    fn from(o: ClassOrdering) -> Self {
        o.labels
    }
}

/// Solvency grade of an insurer, ordered from worst to best.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SolvencyClass {
    Insolvency,
    Weak,
    Moderate,
    Strong,
}

impl SolvencyClass {
    pub const ALL: [SolvencyClass; 4] = [
        SolvencyClass::Insolvency,
        SolvencyClass::Weak,
        SolvencyClass::Moderate,
        SolvencyClass::Strong,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            SolvencyClass::Insolvency => "Insolvency",
            SolvencyClass::Weak => "Weak",
            SolvencyClass::Moderate => "Moderate",
            SolvencyClass::Strong => "Strong",
        }
    }

    /// Regulatory action attached to the grade.
    pub fn action_level(self) -> &'static str {
        match self {
            SolvencyClass::Strong => "No action level",
            SolvencyClass::Moderate => "Company action level",
            SolvencyClass::Weak => "Regulatory action level",
            SolvencyClass::Insolvency => "Authorized control & Mandatory control level",
        }
    }

    /// Inclusive lower CAR bound of the grade, as a ratio.
    pub fn car_floor(self) -> f64 {
        match self {
            SolvencyClass::Insolvency => 0.0,
            SolvencyClass::Weak => CAR_WEAK,
            SolvencyClass::Moderate => CAR_MODERATE,
            SolvencyClass::Strong => CAR_STRONG,
        }
    }
}

impl fmt::Display for SolvencyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// CAR thresholds, stored as ratios (1.0 == 100%).
pub const CAR_WEAK: f64 = 1.00;
pub const CAR_MODERATE: f64 = 1.20;
pub const CAR_STRONG: f64 = 1.50;

/// Grades a capital adequacy ratio. Intervals are closed below, open above.
pub fn label_from_car(car: f64) -> Result<SolvencyClass> {
    if !car.is_finite() || car < 0.0 {
        return Err(invalid(format!(
            "CAR must be finite and non-negative, got {car}"
        )));
    }
    Ok(if car >= CAR_STRONG {
        SolvencyClass::Strong
    } else if car >= CAR_MODERATE {
        SolvencyClass::Moderate
    } else if car >= CAR_WEAK {
        SolvencyClass::Weak
    } else {
        SolvencyClass::Insolvency
    })
}

/// Names of the numeric attributes, in column order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct AttributeSchema {
    names: Vec<String>,
}

impl AttributeSchema {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(invalid(format!("duplicate attribute name `{a}`")));
            }
        }
        Ok(Self { names })
    }

    /// The thirteen financial ratios V1..V13.
    pub fn ratios_v1_v13() -> Self {
        Self {
            names: (1..=13).map(|i| format!("V{i}")).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Sub-schema holding the given attribute indices, in the given order.
    pub fn project(&self, indices: &[usize]) -> Self {
        Self {
            names: indices.iter().map(|&i| self.names[i].clone()).collect(),
        }
    }
}

impl TryFrom<Vec<String>> for AttributeSchema {
    type Error = crate::Error;

    fn try_from(names: Vec<String>) -> Result<Self> {
        Self::new(names)
    }
}

impl From<AttributeSchema> for Vec<String> {
    fn from(s: AttributeSchema) -> Self {
        s.names
    }
}

/// One company-year as read from a CSV file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompanyRecord {
    pub company_id: Option<String>,
    pub year: Option<i32>,
    pub ratios: Vec<f64>,
    pub car: Option<f64>,
    pub tca: Option<f64>,
    pub tcr: Option<f64>,
    pub label: Option<SolvencyClass>,
}

/// Immutable labeled instance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    schema: AttributeSchema,
    ordering: ClassOrdering,
    rows: Vec<Vec<f64>>,
    labels: Vec<usize>,
}

impl Dataset {
    pub fn new(
        schema: AttributeSchema,
        ordering: ClassOrdering,
        rows: Vec<Vec<f64>>,
        labels: Vec<usize>,
    ) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(invalid(format!(
                "{} instances but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        if let Some((i, r)) = rows
            .iter()
            .enumerate()
            .find(|(_, r)| r.len() != schema.len())
        {
            return Err(invalid(format!(
                "instance {i} has {} values, schema has {}",
                r.len(),
                schema.len()
            )));
        }
        if let Some((i, &l)) = labels
            .iter()
            .enumerate()
            .find(|(_, &l)| l >= ordering.len())
        {
            return Err(invalid(format!(
                "instance {i} has label index {l}, ordering has {} classes",
                ordering.len()
            )));
        }
        Ok(Self {
            schema,
            ordering,
            rows,
            labels,
        })
    }

    pub fn schema(&self) -> &AttributeSchema {
        &self.schema
    }

    pub fn ordering(&self) -> &ClassOrdering {
        &self.ordering
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn n_attributes(&self) -> usize {
        self.schema.len()
    }

    pub fn n_classes(&self) -> usize {
        self.ordering.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    /// Values of one attribute across all instances.
    pub fn column(&self, attribute: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[attribute]).collect()
    }

    /// Instance count per class index.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Instances at `indices`, in that order (duplicates allowed).
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            schema: self.schema.clone(),
            ordering: self.ordering.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    /// Keeps only the given attributes, in the given order.
    pub fn project(&self, attributes: &[usize]) -> Self {
        Self {
            schema: self.schema.project(attributes),
            ordering: self.ordering.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| attributes.iter().map(|&a| r[a]).collect())
                .collect(),
            labels: self.labels.clone(),
        }
    }

    /// Same instances under a different label set.
    pub fn relabel(&self, ordering: ClassOrdering, labels: Vec<usize>) -> Result<Self> {
        Self::new(self.schema.clone(), ordering, self.rows.clone(), labels)
    }

    /// True when both datasets share attribute names and class ordering.
    pub fn same_schema(&self, other: &Dataset) -> bool {
        self.schema == other.schema && self.ordering == other.ordering
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn car_examples() {
        assert_eq!(label_from_car(1.60).unwrap(), SolvencyClass::Strong);
        assert_eq!(label_from_car(0.80).unwrap(), SolvencyClass::Insolvency);
        assert_eq!(label_from_car(1.20).unwrap(), SolvencyClass::Moderate);
        assert_eq!(label_from_car(1.00).unwrap(), SolvencyClass::Weak);
    }

    #[test]
    fn car_boundaries() {
        let expect = [
            (0.99, SolvencyClass::Insolvency),
            (1.00, SolvencyClass::Weak),
            (1.19, SolvencyClass::Weak),
            (1.20, SolvencyClass::Moderate),
            (1.49, SolvencyClass::Moderate),
            (1.50, SolvencyClass::Strong),
        ];
        for (car, class) in expect {
            assert_eq!(label_from_car(car).unwrap(), class, "car {car}");
        }
    }

    #[test]
    fn car_rejects_bad_values() {
        assert!(label_from_car(-0.1).is_err());
        assert!(label_from_car(f64::NAN).is_err());
        assert!(label_from_car(f64::INFINITY).is_err());
        assert_eq!(label_from_car(0.0).unwrap(), SolvencyClass::Insolvency);
    }

    #[test]
    fn car_floor_agrees_with_labeling() {
        for c in SolvencyClass::ALL {
            assert_eq!(label_from_car(c.car_floor()).unwrap(), c);
        }
    }

    #[test]
    fn ordering_validation() {
        assert!(ClassOrdering::new(["a"]).is_err());
        assert!(ClassOrdering::new(["a", "A"]).is_err());
        let o = ClassOrdering::solvency();
        assert_eq!(o.index_of("strong"), Some(3));
        assert_eq!(o.index_of(" WEAK "), Some(1));
        assert_eq!(o.index_of("bankrupt"), None);
        assert!(o.is_solvency());
    }

    #[test]
    fn ordering_serde_validates() {
        let o: ClassOrdering = serde_json::from_str(r#"["lo","hi"]"#).unwrap();
        assert_eq!(o.len(), 2);
        assert!(serde_json::from_str::<ClassOrdering>(r#"["x","x"]"#).is_err());
    }

    #[test]
    fn schema_rejects_duplicates() {
        assert!(AttributeSchema::new(["V1", "V1"]).is_err());
        assert_eq!(AttributeSchema::ratios_v1_v13().len(), 13);
    }

    #[test]
    fn dataset_validation() {
        let s = AttributeSchema::new(["a"]).unwrap();
        let o = ClassOrdering::new(["n", "y"]).unwrap();
        assert!(Dataset::new(s.clone(), o.clone(), vec![vec![1.0, 2.0]], vec![0]).is_err());
        assert!(Dataset::new(s.clone(), o.clone(), vec![vec![1.0]], vec![2]).is_err());
        assert!(Dataset::new(s.clone(), o.clone(), vec![vec![1.0]], vec![]).is_err());
        let d = Dataset::new(s, o, vec![vec![1.0], vec![2.0]], vec![0, 1]).unwrap();
        assert_eq!(d.class_counts(), vec![1, 1]);
        assert_eq!(d.subset(&[1, 1]).labels(), &[1, 1]);
    }
}
