//! CSV ingestion and export.
//!
//! Reserved columns are `company_id`, `year`, `car`, `tca`, `tcr` and
//! `class`; every other column is a numeric attribute, kept in header order.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{
    label_from_car, AttributeSchema, ClassOrdering, CompanyRecord, Dataset, SolvencyClass,
};
use crate::error::{invalid, Error, Result};

pub(crate) const RESERVED: [&str; 6] = ["company_id", "year", "car", "tca", "tcr", "class"];

/// How row labels are resolved during ingestion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelMode {
    /// Pick the first available source by header: `class`, then `car`, then `tca`/`tcr`.
    #[default]
    Auto,
    /// Use the `class` column.
    Direct,
    /// Grade the `car` column.
    FromCar,
    /// Grade `tca / tcr`.
    FromTcaTcr,
    /// Labels are optional (prediction input).
    Unlabeled,
}

/// Parsed CSV with its raw cells kept alongside, so callers can re-emit rows.
#[derive(Debug, Clone)]
pub struct RecordTable {
    pub header: Vec<String>,
    pub raw: Vec<Vec<String>>,
    pub schema: AttributeSchema,
    pub records: Vec<CompanyRecord>,
}

impl RecordTable {
    /// Converts to a solvency-ordered dataset; every record must carry a label.
    pub fn to_dataset(&self) -> Result<Dataset> {
        let mut labels = Vec::with_capacity(self.records.len());
        for (i, r) in self.records.iter().enumerate() {
            let label = r.label.ok_or_else(|| Error::Ingestion {
                row: i + 1,
                column: "class".into(),
                message: "no label could be resolved".into(),
            })?;
            labels.push(label.index());
        }
        Dataset::new(
            self.schema.clone(),
            ClassOrdering::solvency(),
            self.records.iter().map(|r| r.ratios.clone()).collect(),
            labels,
        )
    }
}

struct Columns {
    company_id: Option<usize>,
    year: Option<usize>,
    car: Option<usize>,
    tca: Option<usize>,
    tcr: Option<usize>,
    class: Option<usize>,
    attributes: Vec<usize>,
}

impl Columns {
    fn from_header(header: &[String]) -> Self {
        let find = |name: &str| header.iter().position(|h| h.eq_ignore_ascii_case(name));
        let attributes = header
            .iter()
            .enumerate()
            .filter(|(_, h)| !RESERVED.iter().any(|r| h.eq_ignore_ascii_case(r)))
            .map(|(i, _)| i)
            .collect();
        Self {
            company_id: find("company_id"),
            year: find("year"),
            car: find("car"),
            tca: find("tca"),
            tcr: find("tcr"),
            class: find("class"),
            attributes,
        }
    }

    fn resolve_mode(&self, mode: LabelMode) -> Result<LabelMode> {
        let needs = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(invalid(format!("label mode requires a `{what}` column")))
            }
        };
        match mode {
            LabelMode::Auto => {
                if self.class.is_some() {
                    Ok(LabelMode::Direct)
                } else if self.car.is_some() {
                    Ok(LabelMode::FromCar)
                } else if self.tca.is_some() && self.tcr.is_some() {
                    Ok(LabelMode::FromTcaTcr)
                } else {
                    Err(invalid(
                        "no label source: expected a `class`, `car`, or `tca`+`tcr` column",
                    ))
                }
            }
            LabelMode::Direct => needs(self.class.is_some(), "class").map(|_| mode),
            LabelMode::FromCar => needs(self.car.is_some(), "car").map(|_| mode),
            LabelMode::FromTcaTcr => {
                needs(self.tca.is_some() && self.tcr.is_some(), "tca` and `tcr").map(|_| mode)
            }
            LabelMode::Unlabeled => Ok(mode),
        }
    }
}

struct RowParser<'a> {
    row: usize,
    header: &'a [String],
    cells: &'a [String],
}

impl RowParser<'_> {
    fn err(&self, col: usize, message: impl Into<String>) -> Error {
        Error::Ingestion {
            row: self.row,
            column: self.header[col].clone(),
            message: message.into(),
        }
    }

    fn text(&self, col: Option<usize>) -> Option<&str> {
        col.map(|c| self.cells[c].as_str())
            .filter(|s| !s.is_empty())
    }

    fn real(&self, col: Option<usize>) -> Result<Option<f64>> {
        let Some(c) = col else { return Ok(None) };
        match self.text(Some(c)) {
            None => Ok(None),
            Some(s) => self.parse_real(c, s).map(Some),
        }
    }

    fn required_real(&self, col: usize) -> Result<f64> {
        match self.text(Some(col)) {
            None => Err(self.err(col, "missing value")),
            Some(s) => self.parse_real(col, s),
        }
    }

    fn parse_real(&self, col: usize, s: &str) -> Result<f64> {
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            Ok(_) => Err(self.err(col, format!("non-finite value `{s}`"))),
            Err(_) => Err(self.err(col, format!("cannot parse `{s}` as a number"))),
        }
    }
}

/// Reads a CSV into records plus the raw cells.
pub fn load_records<R: Read>(source: R, mode: LabelMode) -> Result<RecordTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(source);
    let mut rows = reader.records();
    let header: Vec<String> = match rows.next() {
        None => return Err(invalid("empty input: a header row is required")),
        Some(h) => h?.iter().map(str::to_string).collect(),
    };
    if header.iter().all(String::is_empty) {
        return Err(invalid("empty input: a header row is required"));
    }
    let cols = Columns::from_header(&header);
    let schema = AttributeSchema::new(cols.attributes.iter().map(|&i| header[i].clone()))?;
    let mode = cols.resolve_mode(mode)?;
    let ordering = ClassOrdering::solvency();

    let mut raw = Vec::new();
    let mut records = Vec::new();
    for (i, rec) in rows.enumerate() {
        let cells: Vec<String> = rec?.iter().map(str::to_string).collect();
        let row = i + 1;
        if cells.len() != header.len() {
            return Err(Error::Ingestion {
                row,
                column: "*".into(),
                message: format!("expected {} cells, found {}", header.len(), cells.len()),
            });
        }
        let p = RowParser {
            row,
            header: &header,
            cells: &cells,
        };

        let ratios = cols
            .attributes
            .iter()
            .map(|&c| p.required_real(c))
            .collect::<Result<Vec<_>>>()?;
        let year =
            match p.text(cols.year) {
                None => None,
                Some(s) => Some(s.parse::<i32>().map_err(|_| {
                    p.err(cols.year.unwrap(), format!("cannot parse `{s}` as a year"))
                })?),
            };
        let mut car = p.real(cols.car)?;
        let tca = p.real(cols.tca)?;
        let tcr = p.real(cols.tcr)?;
        if let Some(t) = tcr {
            if t <= 0.0 {
                return Err(p.err(cols.tcr.unwrap(), "total capital required must be positive"));
            }
        }
        if let (Some(a), Some(r)) = (tca, tcr) {
            let ratio = a / r;
            if let Some(c) = car {
                if (c - ratio).abs() > 1e-9 * c.abs().max(1.0) {
                    return Err(p.err(
                        cols.car.unwrap(),
                        format!("car {c} disagrees with tca/tcr = {ratio}"),
                    ));
                }
            }
            car = Some(ratio);
        }
        let class = match p.text(cols.class) {
            None => None,
            Some(s) => {
                let idx = ordering
                    .index_of(s)
                    .ok_or_else(|| p.err(cols.class.unwrap(), format!("unknown class `{s}`")))?;
                SolvencyClass::from_index(idx)
            }
        };
        let grade = |col: usize, v: Option<f64>| -> Result<SolvencyClass> {
            let v = v.ok_or_else(|| p.err(col, "missing value"))?;
            label_from_car(v).map_err(|e| p.err(col, e.to_string()))
        };
        let label = match mode {
            LabelMode::Direct => {
                Some(class.ok_or_else(|| p.err(cols.class.unwrap(), "missing value"))?)
            }
            LabelMode::FromCar => Some(grade(cols.car.unwrap(), car)?),
            LabelMode::FromTcaTcr => {
                for c in [cols.tca.unwrap(), cols.tcr.unwrap()] {
                    p.required_real(c)?;
                }
                Some(grade(cols.tcr.unwrap(), car)?)
            }
            LabelMode::Unlabeled => match (class, car) {
                (Some(c), _) => Some(c),
                (None, Some(v)) => label_from_car(v).ok(),
                (None, None) => None,
            },
            LabelMode::Auto => unreachable!("resolved above"),
        };

        records.push(CompanyRecord {
            company_id: p.text(cols.company_id).map(str::to_string),
            year,
            ratios,
            car,
            tca,
            tcr,
            label,
        });
        raw.push(cells);
    }

    Ok(RecordTable {
        header,
        raw,
        schema,
        records,
    })
}

/// Reads a labeled CSV into a solvency-ordered dataset; row order is preserved.
pub fn load_csv<R: Read>(source: R, mode: LabelMode) -> Result<Dataset> {
    if mode == LabelMode::Unlabeled {
        return Err(invalid(
            "a dataset needs labels; use load_records for unlabeled input",
        ));
    }
    load_records(source, mode)?.to_dataset()
}

/// Writes attribute columns plus a `class` column. Values use the shortest
/// decimal form that parses back to the same `f64`.
pub fn write_csv<W: Write>(dataset: &Dataset, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    let mut header: Vec<&str> = dataset
        .schema()
        .names()
        .iter()
        .map(String::as_str)
        .collect();
    header.push("class");
    w.write_record(&header)?;
    for (row, &label) in dataset.rows().iter().zip(dataset.labels()) {
        let mut cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        cells.push(dataset.ordering().label(label).to_string());
        w.write_record(&cells)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str, mode: LabelMode) -> Result<Dataset> {
        load_csv(text.as_bytes(), mode)
    }

    #[test]
    fn car_column_labels() {
        let d = load("V1,car\n0.5,1.6\n0.7,1.1\n0.9,0.9\n", LabelMode::FromCar).unwrap();
        assert_eq!(d.labels(), &[3, 1, 0]);
        assert_eq!(d.schema().names(), &["V1".to_string()]);
        assert_eq!(d.column(0), vec![0.5, 0.7, 0.9]);
    }

    #[test]
    fn direct_class_lookup() {
        let d = load("V1,class\n1.0,Strong\n2.0,weak\n", LabelMode::Direct).unwrap();
        assert_eq!(d.labels(), &[3, 1]);
    }

    #[test]
    fn auto_prefers_class_then_car() {
        let d = load("V1,car,class\n1.0,0.5,Strong\n", LabelMode::Auto).unwrap();
        assert_eq!(d.labels(), &[3]);
        let d = load("V1,car\n1.0,0.5\n", LabelMode::Auto).unwrap();
        assert_eq!(d.labels(), &[0]);
        let d = load("V1,tca,tcr\n1.0,130,100\n", LabelMode::Auto).unwrap();
        assert_eq!(d.labels(), &[2]);
        assert!(load("V1\n1.0\n", LabelMode::Auto).is_err());
    }

    #[test]
    fn blank_cell_names_row_and_column() {
        let err = load("V1,V2,car\n1,2,1.5\n1,,1.5\n", LabelMode::FromCar).unwrap_err();
        match err {
            Error::Ingestion { row, column, .. } => {
                assert_eq!(row, 2);
                assert_eq!(column, "V2");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unparseable_and_unknown_label() {
        assert!(matches!(
            load("V1,car\nabc,1.5\n", LabelMode::FromCar),
            Err(Error::Ingestion { .. })
        ));
        assert!(matches!(
            load("V1,class\n1,Bankrupt\n", LabelMode::Direct),
            Err(Error::Ingestion { .. })
        ));
        assert!(matches!(
            load("V1,car\ninf,1.5\n", LabelMode::FromCar),
            Err(Error::Ingestion { .. })
        ));
    }

    #[test]
    fn zero_tcr_rejected() {
        let err = load("V1,tca,tcr\n1,5,0\n", LabelMode::FromTcaTcr).unwrap_err();
        assert!(matches!(err, Error::Ingestion { ref column, .. } if column == "tcr"));
    }

    #[test]
    fn tca_tcr_sets_car() {
        let t = load_records("V1,tca,tcr\n1,150,100\n".as_bytes(), LabelMode::FromTcaTcr).unwrap();
        assert_eq!(t.records[0].car, Some(1.5));
        assert_eq!(t.records[0].label, Some(SolvencyClass::Strong));
        // inconsistent explicit car
        assert!(load("V1,car,tca,tcr\n1,1.1,150,100\n", LabelMode::FromCar).is_err());
    }

    #[test]
    fn empty_input_is_error() {
        assert!(load("", LabelMode::Auto).is_err());
        let t = load_records("V1,car\n".as_bytes(), LabelMode::Unlabeled).unwrap();
        assert!(t.records.is_empty());
    }

    #[test]
    fn reserved_columns_excluded_from_schema() {
        let t = load_records(
            "company_id,year,V1,car,V2\nA01,2004,0.1,1.3,0.2\n".as_bytes(),
            LabelMode::Auto,
        )
        .unwrap();
        assert_eq!(t.schema.names(), &["V1".to_string(), "V2".to_string()]);
        let r = &t.records[0];
        assert_eq!(r.company_id.as_deref(), Some("A01"));
        assert_eq!(r.year, Some(2004));
        assert_eq!(r.ratios, vec![0.1, 0.2]);
    }

    #[test]
    fn write_then_load_preserves_values() {
        let d = load(
            "V1,V2,class\n0.1,1e-7,Strong\n123456.789012345,-3.25,Insolvency\n",
            LabelMode::Direct,
        )
        .unwrap();
        let mut buf = Vec::new();
        write_csv(&d, &mut buf).unwrap();
        let back = load_csv(buf.as_slice(), LabelMode::Direct).unwrap();
        assert_eq!(back, d);
    }
}
