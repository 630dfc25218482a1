use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use solvency_core::dataset::{
    load_csv, load_records, synth_records, ClassOrdering, Dataset, LabelMode, SolvencyClass,
    SynthSpec,
};
use solvency_core::eval::{
    cross_validate, holdout, percentage_split, render_text, EvaluationReport, FitSummary,
    ReportFormat,
};
use solvency_core::featsel::greedy_stepwise;
use solvency_core::model::Model;

use crate::config::{CommandConfig, EvalProtocol, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Core(#[from] solvency_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Read { .. } => 2,
            CliError::Core(e) if e.is_input_error() => 2,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub struct Context {
    pub quiet: bool,
}

impl Context {
    pub fn note(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|source| CliError::Write {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut out = io::stdout().lock();
            match out.write_all(bytes).and_then(|_| out.flush()) {
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
                r => r.map_err(|source| CliError::Write {
                    path: PathBuf::from("<stdout>"),
                    source,
                }),
            }
        }
    }
}

fn load(path: &Path, mode: LabelMode) -> Result<Dataset> {
    Ok(load_csv(read(path)?.as_bytes(), mode)?)
}

fn csv_bytes(header: &[String], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut put = |r: &[String]| w.write_record(r).map_err(solvency_core::Error::from);
    put(header)?;
    for r in rows {
        put(r)?;
    }
    Ok(w.into_inner()
        .map_err(|e| solvency_core::Error::from(e.into_error()))?)
}

/// JSON output that carries the run configuration alongside the payload.
#[derive(Serialize)]
struct WithConfig<'a, T: Serialize> {
    config: &'a RunConfig,
    #[serde(flatten)]
    payload: T,
}

fn json_with_config<T: Serialize>(config: &RunConfig, payload: T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&WithConfig { config, payload })
        .map_err(solvency_core::Error::from)?;
    s.push('\n');
    Ok(s)
}

fn action_level(ordering: &ClassOrdering, class: usize) -> &'static str {
    if ordering.is_solvency() {
        SolvencyClass::from_index(class).map_or("", SolvencyClass::action_level)
    } else {
        ""
    }
}

pub fn execute(config: &RunConfig, ctx: &Context) -> Result<()> {
    match &config.command {
        CommandConfig::Label {
            input,
            output,
            label_mode,
        } => label(input, output.as_deref(), *label_mode),
        CommandConfig::Select {
            input,
            output,
            label_mode,
            bins,
        } => {
            let data = load(input, *label_mode)?;
            let sel = greedy_stepwise(&data, *bins)?;
            let names: Vec<&str> = sel
                .attributes
                .iter()
                .map(|&a| data.schema().name(a))
                .collect();
            let text = match config.format {
                ReportFormat::Text => {
                    let mut s =
                        serde_json::to_string(&names).map_err(solvency_core::Error::from)?;
                    s.push('\n');
                    s
                }
                ReportFormat::Json => {
                    #[derive(Serialize)]
                    struct Out<'a> {
                        attributes: Vec<&'a str>,
                        merits: &'a [f64],
                    }
                    json_with_config(
                        config,
                        Out {
                            attributes: names,
                            merits: &sel.merits,
                        },
                    )?
                }
            };
            write(output.as_deref(), text.as_bytes())
        }
        CommandConfig::Train {
            input,
            output,
            summary,
            label_mode,
            pipeline,
        } => {
            let data = load(input, *label_mode)?;
            let fitted = pipeline.pipeline(config.seed).fit(&data)?;
            write(Some(output), fitted.model.to_json()?.as_bytes())?;
            ctx.note(format!("model written to {}", output.display()));
            let text = match config.format {
                ReportFormat::Text => summary_text(&fitted.summary, fitted.model.ordering()),
                ReportFormat::Json => {
                    #[derive(Serialize)]
                    struct Out<'a> {
                        summary: &'a FitSummary,
                    }
                    json_with_config(
                        config,
                        Out {
                            summary: &fitted.summary,
                        },
                    )?
                }
            };
            write(summary.as_deref(), text.as_bytes())
        }
        CommandConfig::Evaluate {
            input,
            output,
            label_mode,
            protocol,
            pipeline,
        } => {
            let data = load(input, *label_mode)?;
            let p = pipeline.pipeline(config.seed);
            let report = match protocol {
                EvalProtocol::CrossValidation(k) => cross_validate(&data, *k, &p, config.seed)?,
                EvalProtocol::Split(pct) => {
                    percentage_split(&data, f64::from(100 - pct) / 100.0, &p, config.seed)?
                }
                EvalProtocol::Holdout(path) => holdout(&data, &load(path, *label_mode)?, &p)?,
            };
            let text = match config.format {
                ReportFormat::Text => render_text(&report),
                ReportFormat::Json => {
                    #[derive(Serialize)]
                    struct Out<'a> {
                        report: &'a EvaluationReport,
                    }
                    json_with_config(config, Out { report: &report })?
                }
            };
            write(output.as_deref(), text.as_bytes())
        }
        CommandConfig::Classify {
            model,
            input,
            output,
        } => classify(model, input, output.as_deref()),
        CommandConfig::Synth {
            counts,
            noise,
            output,
        } => synth(counts, *noise, config.seed, output.as_deref()),
    }
}

fn label(input: &Path, output: Option<&Path>, mode: LabelMode) -> Result<()> {
    let table = load_records(read(input)?.as_bytes(), mode)?;
    let class_col = table
        .header
        .iter()
        .position(|h| h.eq_ignore_ascii_case("class"));
    let mut header = table.header.clone();
    if class_col.is_none() {
        header.push("class".into());
    }
    header.push("action_level".into());
    let rows: Vec<Vec<String>> = table
        .raw
        .iter()
        .zip(&table.records)
        .map(|(raw, rec)| {
            let class = rec.label.expect("labeled ingestion resolves every row");
            let mut cells = raw.clone();
            match class_col {
                Some(c) => cells[c] = class.name().to_string(),
                None => cells.push(class.name().to_string()),
            }
            cells.push(class.action_level().to_string());
            cells
        })
        .collect();
    write(output, &csv_bytes(&header, &rows)?)
}

fn classify(model_path: &Path, input: &Path, output: Option<&Path>) -> Result<()> {
    let model = Model::from_json(&read(model_path)?)?;
    let ordering = model.ordering();
    let extra = std::iter::once("predicted_class".to_string())
        .chain(ordering.labels().iter().map(|l| format!("score_{l}")))
        .chain(std::iter::once("action_level".to_string()));

    let text = read(input)?;
    if text.trim().is_empty() {
        let header: Vec<String> = model
            .attributes()
            .names()
            .iter()
            .cloned()
            .chain(extra)
            .collect();
        return write(output, &csv_bytes(&header, &[])?);
    }
    let table = load_records(text.as_bytes(), LabelMode::Unlabeled)?;
    let positions = model.align(&table.schema)?;
    let header: Vec<String> = table.header.iter().cloned().chain(extra).collect();
    let rows: Vec<Vec<String>> = table
        .raw
        .iter()
        .zip(&table.records)
        .map(|(raw, rec)| {
            let instance: Vec<f64> = positions.iter().map(|&p| rec.ratios[p]).collect();
            let c = model.classify(&instance);
            let mut cells = raw.clone();
            cells.push(ordering.label(c.class).to_string());
            cells.extend(c.scores.iter().map(f64::to_string));
            cells.push(action_level(ordering, c.class).to_string());
            cells
        })
        .collect();
    write(output, &csv_bytes(&header, &rows)?)
}

fn synth(counts: &[usize], noise: f64, seed: u64, output: Option<&Path>) -> Result<()> {
    let records = synth_records(&SynthSpec {
        counts: counts.to_vec(),
        seed,
        noise,
    })?;
    let names = solvency_core::dataset::AttributeSchema::ratios_v1_v13();
    let header: Vec<String> = ["company_id", "year"]
        .iter()
        .map(|s| s.to_string())
        .chain(names.names().iter().cloned())
        .chain(["car".to_string(), "class".to_string()])
        .collect();
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            let mut cells = vec![
                r.company_id.clone().unwrap_or_default(),
                r.year.map(|y| y.to_string()).unwrap_or_default(),
            ];
            cells.extend(r.ratios.iter().map(f64::to_string));
            cells.push(r.car.map(|c| c.to_string()).unwrap_or_default());
            cells.push(r.label.map(|l| l.name().to_string()).unwrap_or_default());
            cells
        })
        .collect();
    write(output, &csv_bytes(&header, &rows)?)
}

fn summary_text(summary: &FitSummary, ordering: &ClassOrdering) -> String {
    let mut out = String::new();
    let merit = summary
        .selection_merit
        .map(|m| format!(" (merit {m:.4})"))
        .unwrap_or_default();
    out.push_str(&format!(
        "Selected attributes: {}{merit}\n",
        summary.selected_attributes.join(", ")
    ));
    let counts: Vec<String> = ordering
        .labels()
        .iter()
        .zip(&summary.training_class_counts)
        .map(|(l, c)| format!("{l} {c}"))
        .collect();
    out.push_str(&format!("Training class counts: {}\n", counts.join(", ")));
    let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join("/");
    out.push_str(&format!(
        "Trees: {} (nodes {}, leaves {})\n",
        summary.tree_nodes.len(),
        join(&summary.tree_nodes),
        join(&summary.tree_leaves)
    ));
    out
}
