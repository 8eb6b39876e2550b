//! Experiment configuration, per-event rows and their CSV/JSON output.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::exact::{to_f64, ExactProb};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Everything needed to reproduce a report: identical configs give
/// byte-identical output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(default)]
    pub model: Option<crate::kernels::KernelKind>,
    /// Ball radius.
    #[serde(default)]
    pub r: Option<i64>,
    /// Sizes, heights or set elements, depending on the experiment.
    #[serde(default)]
    pub params: Vec<i64>,
    pub trials: u64,
    pub seed: u64,
    #[serde(default = "default_streams")]
    pub streams: u64,
    #[serde(default)]
    pub output: Option<std::path::PathBuf>,
    #[serde(default)]
    pub format: Format,
}

pub fn default_streams() -> u64 {
    8
}

impl ExperimentConfig {
    pub fn new(experiment: &str, trials: u64, seed: u64) -> ExperimentConfig {
        ExperimentConfig {
            experiment: experiment.into(),
            model: None,
            r: None,
            params: Vec::new(),
            trials,
            seed,
            streams: default_streams(),
            output: None,
            format: Format::Csv,
        }
    }

    /// Trials of stream `i` when `trials` are split over `streams`.
    pub fn stream_trials(&self, i: u64) -> u64 {
        let s = self.streams.max(1);
        self.trials / s + u64::from(i < self.trials % s)
    }
}

/// One event: an empirical frequency or mean against an exact value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McRow {
    pub experiment: String,
    pub event: String,
    pub trials: u64,
    pub empirical: f64,
    #[serde(skip)]
    pub exact: Option<ExactProb>,
    pub exact_num: String,
    pub exact_den: String,
    pub stderr: f64,
    pub z: f64,
}

impl McRow {
    /// Binomial row: `hits` successes out of `trials`; the standard error
    /// uses the exact probability when there is one.
    pub fn frequency(experiment: &str, event: impl Into<String>, hits: u64, trials: u64, exact: Option<ExactProb>) -> McRow {
        let emp = hits as f64 / trials as f64;
        let p = exact.as_ref().map(to_f64).unwrap_or(emp);
        let stderr = (p * (1.0 - p) / trials as f64).sqrt();
        McRow::build(experiment, event.into(), trials, emp, exact, stderr)
    }

    /// Mean row with a sample standard error.
    pub fn mean(experiment: &str, event: impl Into<String>, mean: f64, stderr: f64, trials: u64, exact: Option<ExactProb>) -> McRow {
        McRow::build(experiment, event.into(), trials, mean, exact, stderr)
    }

    /// Statistic without an exact counterpart.
    pub fn statistic(experiment: &str, event: impl Into<String>, value: f64, trials: u64) -> McRow {
        McRow::build(experiment, event.into(), trials, value, None, f64::NAN)
    }

    fn build(experiment: &str, event: String, trials: u64, empirical: f64, exact: Option<ExactProb>, stderr: f64) -> McRow {
        let (exact_num, exact_den, z) = match &exact {
            Some(q) => {
                let z = if stderr > 0.0 {
                    (empirical - to_f64(q)) / stderr
                } else if empirical == to_f64(q) {
                    0.0
                } else {
                    f64::INFINITY
                };
                (q.numer().to_string(), q.denom().to_string(), z)
            }
            None => (String::new(), String::new(), f64::NAN),
        };
        McRow { experiment: experiment.into(), event, trials, empirical, exact, exact_num, exact_den, stderr, z }
    }

    /// `|z| < bound`; rows without an exact value pass vacuously.
    pub fn within(&self, bound: f64) -> bool {
        self.exact.is_none() || self.z.abs() < bound
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McReport {
    pub config: ExperimentConfig,
    pub rows: Vec<McRow>,
    pub notes: Vec<String>,
}

impl McReport {
    pub fn new(config: ExperimentConfig) -> McReport {
        McReport { config, rows: Vec::new(), notes: Vec::new() }
    }

    pub fn row(&self, event: &str) -> Option<&McRow> {
        self.rows.iter().find(|r| r.event == event)
    }

    pub fn max_abs_z(&self) -> f64 {
        self.rows.iter().filter(|r| r.exact.is_some()).map(|r| r.z.abs()).fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.rows {
            out.serialize(r)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is UTF-8")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render(&self) -> String {
        match self.config.format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}
