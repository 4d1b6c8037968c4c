use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::data::{load_delimited, load_libsvm, Dataset, DelimitedOptions};
use crate::error::{Error, Result};
use crate::eval::Algorithm;
use crate::features::ExpansionMode;
use crate::model::{Weighting, DEFAULT_RIDGE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataFormat {
    Csv,
    Libsvm,
}

impl std::str::FromStr for DataFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(DataFormat::Csv),
            "libsvm" => Ok(DataFormat::Libsvm),
            other => Err(Error::Validation(format!("unknown format `{other}`"))),
        }
    }
}

/// Where the min-max scaler is fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Once on the full dataset, before splitting.
    #[default]
    Global,
    /// On each training fold; the test fold reuses that fit.
    PerFold,
}

impl std::str::FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "global" => Ok(Normalization::Global),
            "per_fold" | "per-fold" | "fold" => Ok(Normalization::PerFold),
            other => Err(Error::Validation(format!("unknown normalization `{other}`"))),
        }
    }
}

/// Everything that determines an experiment's output (apart from `jobs`,
/// which only bounds parallelism).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub data: Option<PathBuf>,
    pub format: DataFormat,
    /// 0-based label column for delimited files; `None` is the last column.
    pub label_column: Option<usize>,
    pub positive_label: String,
    pub ignore_columns: Vec<usize>,
    /// Minimum feature count for LIBSVM files.
    pub dim: Option<usize>,
    pub algo: Algorithm,
    pub orders: Vec<usize>,
    pub b: f64,
    pub runs: usize,
    pub seed: u64,
    pub weighting: Weighting,
    pub expansion: ExpansionMode,
    pub normalization: Normalization,
    /// Test G-mean cadence for online learners; `None` is `max(1, n/200)`.
    pub gmean_every: Option<usize>,
    pub out: PathBuf,
    /// Worker threads; 0 uses all available cores.
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            data: None,
            format: DataFormat::Csv,
            label_column: None,
            positive_label: "1".into(),
            ignore_columns: Vec::new(),
            dim: None,
            algo: Algorithm::Nrrls,
            orders: (1..=6).collect(),
            b: DEFAULT_RIDGE,
            runs: 10,
            seed: 0,
            weighting: Weighting::Rebalanced,
            expansion: ExpansionMode::Auto,
            normalization: Normalization::Global,
            gmean_every: None,
            out: PathBuf::from("out"),
            jobs: 0,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Validation(format!("bad value `{value}` for `{key}`")))
}

fn parse_optional<T: std::str::FromStr>(key: &str, value: &str) -> Result<Option<T>> {
    match value {
        "" | "none" | "auto" | "last" => Ok(None),
        v => parse_num(key, v).map(Some),
    }
}

/// `3`, `1,2,5`, `2-4` or `all`.
pub fn parse_orders(value: &str) -> Result<Vec<usize>> {
    if value == "all" {
        return Ok((1..=6).collect());
    }
    let mut orders = Vec::new();
    for part in value.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((lo, hi)) => {
                let (lo, hi): (usize, usize) = (parse_num("order", lo)?, parse_num("order", hi)?);
                orders.extend(lo..=hi);
            }
            None => orders.push(parse_num("order", part)?),
        }
    }
    Ok(orders)
}

impl RunConfig {
    /// Sets one field from its textual key (`-` and `_` are interchangeable).
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim().replace('-', "_").as_str() {
            "data" => self.data = Some(PathBuf::from(value)),
            "format" => self.format = value.parse()?,
            "label_column" => self.label_column = parse_optional(key, value)?,
            "positive_label" => self.positive_label = value.to_string(),
            "ignore_columns" => {
                self.ignore_columns = value
                    .split(',')
                    .map(str::trim)
                    .filter(|v| !v.is_empty())
                    .map(|v| parse_num(key, v))
                    .collect::<Result<_>>()?
            }
            "dim" => self.dim = parse_optional(key, value)?,
            "algo" | "algorithm" => self.algo = value.parse()?,
            "order" | "orders" => self.orders = parse_orders(value)?,
            "b" => self.b = parse_num(key, value)?,
            "runs" => self.runs = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "weighting" => self.weighting = value.parse()?,
            "expansion" => self.expansion = value.parse()?,
            "normalization" => self.normalization = value.parse()?,
            "gmean_every" => self.gmean_every = parse_optional(key, value)?,
            "out" => self.out = PathBuf::from(value),
            "jobs" => self.jobs = parse_num(key, value)?,
            other => return Err(Error::Validation(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Validation(format!("config line {}: expected key=value", i + 1)))?;
            self.apply(k, v)?;
        }
        Ok(())
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = RunConfig::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    /// The `config` object of a `manifest.json`.
    pub fn from_manifest(path: impl AsRef<Path>) -> Result<Self> {
        #[derive(Deserialize)]
        struct Stored {
            config: RunConfig,
        }
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let stored: Stored =
            serde_json::from_str(&text).map_err(|e| Error::Validation(format!("bad manifest: {e}")))?;
        Ok(stored.config)
    }

    /// Checks protocol parameters; `needs_data` also requires an existing data file.
    pub fn validate(&self, needs_data: bool) -> Result<()> {
        if self.orders.is_empty() {
            return Err(Error::Validation("at least one polynomial order is required".into()));
        }
        if let Some(r) = self.orders.iter().find(|r| !(1..=6).contains(*r)) {
            return Err(Error::Validation(format!("polynomial order must be in 1..=6, got {r}")));
        }
        if !(self.b > 0.0 && self.b.is_finite()) {
            return Err(Error::Validation(format!("b must be positive and finite, got {}", self.b)));
        }
        if self.runs == 0 {
            return Err(Error::Validation("runs must be at least 1".into()));
        }
        if needs_data {
            let path = self.data.as_ref().ok_or_else(|| Error::Validation("--data is required".into()))?;
            if !path.exists() {
                return Err(Error::io(path, std::io::Error::from(std::io::ErrorKind::NotFound)));
            }
        }
        Ok(())
    }

    pub fn load_dataset(&self) -> Result<Dataset> {
        let path = self.data.as_ref().ok_or_else(|| Error::Validation("--data is required".into()))?;
        match self.format {
            DataFormat::Csv => {
                let opts = DelimitedOptions::new(self.label_column, self.positive_label.clone())
                    .ignoring(self.ignore_columns.iter().copied());
                load_delimited(path, &opts)
            }
            DataFormat::Libsvm => load_libsvm(path, self.dim),
        }
    }
}
