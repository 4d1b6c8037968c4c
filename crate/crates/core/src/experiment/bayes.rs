use std::path::PathBuf;

use serde::Serialize;

use super::write_json;
use crate::data::gen_gaussian_imbalanced;
use crate::error::{Error, Result};
use crate::features::{ExpansionMode, PolyExpander};
use crate::model::{Hyperparams, Label, NrRls, DEFAULT_RIDGE};

pub const MIN_BAYES_SAMPLES: usize = 100;

/// Seed offset for the held-out agreement sample.
const HOLDOUT_SEED: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, PartialEq)]
pub struct BayesConfig {
    pub n: usize,
    pub ratio: f64,
    pub seed: u64,
    pub mean_sep: f64,
    pub b: f64,
    pub out: Option<PathBuf>,
}

impl Default for BayesConfig {
    fn default() -> Self {
        BayesConfig { n: 5000, ratio: 0.25, seed: 0, mean_sep: 2.0, b: DEFAULT_RIDGE, out: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BayesReport {
    pub n: usize,
    pub ratio: f64,
    pub seed: u64,
    pub mean_sep: f64,
    pub n_neg: usize,
    pub n_pos: usize,
    /// Fraction of an independent sample of the same size on which the
    /// learned rule and the closed-form rule agree.
    pub agreement: f64,
    pub bayes_w: Vec<f64>,
    pub bayes_c: f64,
    /// `[bias, w₁, w₂]` of the order-1 learner.
    pub learned_w: Vec<f64>,
}

/// Streams shared-covariance Gaussians through order-1 NR-RLS and compares
/// its decisions with the weighted Bayes rule. Writes `bayes.json` when `out` is set.
pub fn cmd_bayes(cfg: &BayesConfig) -> Result<BayesReport> {
    if cfg.n < MIN_BAYES_SAMPLES {
        return Err(Error::Validation(format!("bayes needs n >= {MIN_BAYES_SAMPLES}, got {}", cfg.n)));
    }
    let train = gen_gaussian_imbalanced(cfg.n, cfg.ratio, cfg.mean_sep, cfg.seed)?;
    let holdout = gen_gaussian_imbalanced(cfg.n, cfg.ratio, cfg.mean_sep, cfg.seed ^ HOLDOUT_SEED)?;
    let ex = PolyExpander::new(1, 2, ExpansionMode::FullMultinomial)?;
    let mut learner = NrRls::new(Hyperparams::new(ex.output_dim()).with_b(cfg.b))?;
    for (i, &y) in train.dataset.labels().iter().enumerate() {
        learner.update(&ex.expand(train.dataset.row(i))?, y)?;
    }
    let mut agree = 0usize;
    for i in 0..holdout.dataset.len() {
        let x = holdout.dataset.row(i);
        if learner.classify(&ex.expand(x)?) == train.bayes.classify(x) {
            agree += 1;
        }
    }
    let report = BayesReport {
        n: cfg.n,
        ratio: cfg.ratio,
        seed: cfg.seed,
        mean_sep: cfg.mean_sep,
        n_neg: train.dataset.count(Label::Negative),
        n_pos: train.dataset.count(Label::Positive),
        agreement: agree as f64 / holdout.dataset.len() as f64,
        bayes_w: train.bayes.w.clone(),
        bayes_c: train.bayes.c,
        learned_w: learner.coefficients().to_vec(),
    };
    if let Some(out) = &cfg.out {
        std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
        write_json(out.join("bayes.json"), &report)?;
    }
    Ok(report)
}
