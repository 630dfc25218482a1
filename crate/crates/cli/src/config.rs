//! Serializable description of one run, embedded in JSON outputs so a run
//! can be replayed with `--from-config`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use solvency_core::balance::ResampleSpec;
use solvency_core::dataset::LabelMode;
use solvency_core::eval::{Pipeline, ReportFormat};
use solvency_core::ordinal::{CombineRule, OrdinalParams};
use solvency_core::tree::{Pruning, TreeParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub format: ReportFormat,
    pub command: CommandConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum CommandConfig {
    Label {
        input: PathBuf,
        output: Option<PathBuf>,
        label_mode: LabelMode,
    },
    Select {
        input: PathBuf,
        output: Option<PathBuf>,
        label_mode: LabelMode,
        bins: usize,
    },
    Train {
        input: PathBuf,
        output: PathBuf,
        summary: Option<PathBuf>,
        label_mode: LabelMode,
        pipeline: PipelineConfig,
    },
    Evaluate {
        input: PathBuf,
        output: Option<PathBuf>,
        label_mode: LabelMode,
        protocol: EvalProtocol,
        pipeline: PipelineConfig,
    },
    Classify {
        model: PathBuf,
        input: PathBuf,
        output: Option<PathBuf>,
    },
    Synth {
        counts: Vec<usize>,
        noise: f64,
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub select: bool,
    pub bins: usize,
    pub resample: bool,
    pub bias: f64,
    pub size: Option<usize>,
    pub min_leaf: usize,
    pub pruned: bool,
    pub confidence: f64,
    pub ordinal: bool,
    pub combine: CombineRule,
    pub laplace: bool,
    pub normalize: bool,
    pub resample_before_split: bool,
}

impl PipelineConfig {
    pub fn pipeline(&self, seed: u64) -> Pipeline {
        Pipeline {
            selection_bins: self.select.then_some(self.bins),
            resample: self.resample.then_some(ResampleSpec {
                seed,
                bias: self.bias,
                output_size: self.size,
            }),
            model: OrdinalParams {
                tree: TreeParams {
                    min_leaf: self.min_leaf,
                    pruning: if self.pruned {
                        Pruning::Pessimistic {
                            confidence: self.confidence,
                        }
                    } else {
                        Pruning::None
                    },
                },
                combine: self.combine,
                normalize: self.normalize,
                laplace: self.laplace,
            },
            ordinal: self.ordinal,
            resample_before_split: self.resample_before_split,
        }
    }
}

/// Evaluation protocol as written on the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum EvalProtocol {
    CrossValidation(usize),
    /// Test share in percent.
    Split(u32),
    Holdout(PathBuf),
}

impl FromStr for EvalProtocol {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad =
            || format!("unknown protocol `{s}`; expected cv<k>, split<pct> or holdout:<path>");
        if let Some(path) = s.strip_prefix("holdout:") {
            if path.is_empty() {
                return Err(bad());
            }
            return Ok(EvalProtocol::Holdout(PathBuf::from(path)));
        }
        if let Some(k) = s.strip_prefix("cv") {
            return match k.parse::<usize>() {
                Ok(k) if k >= 2 => Ok(EvalProtocol::CrossValidation(k)),
                _ => Err(bad()),
            };
        }
        if let Some(p) = s.strip_prefix("split") {
            return match p.parse::<u32>() {
                Ok(p) if (1..100).contains(&p) => Ok(EvalProtocol::Split(p)),
                _ => Err(bad()),
            };
        }
        Err(bad())
    }
}

impl fmt::Display for EvalProtocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalProtocol::CrossValidation(k) => write!(f, "cv{k}"),
            EvalProtocol::Split(p) => write!(f, "split{p}"),
            EvalProtocol::Holdout(path) => write!(f, "holdout:{}", path.display()),
        }
    }
}

impl TryFrom<String> for EvalProtocol {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<EvalProtocol> for String {
    fn from(p: EvalProtocol) -> Self {
        p.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn protocol_parsing() {
        assert_eq!("cv10".parse(), Ok(EvalProtocol::CrossValidation(10)));
        assert_eq!("split30".parse(), Ok(EvalProtocol::Split(30)));
        assert_eq!(
            "holdout:data/test.csv".parse(),
            Ok(EvalProtocol::Holdout("data/test.csv".into()))
        );
        for bad in ["cv1", "cv", "split0", "split100", "holdout:", "loo"] {
            assert!(bad.parse::<EvalProtocol>().is_err(), "{bad}");
        }
    }

    #[test]
    fn config_round_trip() {
        let cfg = RunConfig {
            seed: 9,
            format: ReportFormat::Json,
            command: CommandConfig::Evaluate {
                input: "a.csv".into(),
                output: None,
                label_mode: LabelMode::Auto,
                protocol: EvalProtocol::Holdout("b.csv".into()),
                pipeline: PipelineConfig {
                    select: true,
                    bins: 10,
                    resample: true,
                    bias: 1.0,
                    size: None,
                    min_leaf: 2,
                    pruned: true,
                    confidence: 0.25,
                    ordinal: true,
                    combine: CombineRule::Telescoping,
                    laplace: false,
                    normalize: false,
                    resample_before_split: false,
                },
            },
        };
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains("\"protocol\":\"holdout:b.csv\""));
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), cfg);
    }
}
