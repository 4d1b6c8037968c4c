use std::fmt::Write as _;

use serde::Serialize;

use super::{write_file, write_json, Normalization, RunConfig};
use crate::data::{make_splits, Dataset};
use crate::error::{Error, Result};
use crate::eval::{confusion, fmt_f64, g_mean};
use crate::features::{ExpansionMode, MinMaxScaler, PolyExpander};
use crate::linalg::{rel_diff, Mat};
use crate::model::{
    batch_ls_solve, batch_ter_solve_with, classify, predict, Coefficients, Hyperparams, LabeledSample, NrRls, Rls,
    Weighting,
};

pub const TRACE_HEADER: &str = "step,nrrls_w_l2,batch_w_l2,rel_diff,rls_w_l2";
pub const COEFFICIENTS_HEADER: &str = "index,nrrls,batch,rls";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergeReport {
    pub dataset: String,
    pub order: usize,
    pub expansion: ExpansionMode,
    pub dim: usize,
    pub weighting: Weighting,
    /// `ter_batch` for rebalanced weighting, `ls_batch` for fixed.
    pub batch: &'static str,
    pub n_train: usize,
    pub n_test: usize,
    /// True when the dataset is too small to split and the training set is reused.
    pub test_on_train: bool,
    pub max_rel_diff: f64,
    pub final_g_mean_nrrls: f64,
    pub final_g_mean_batch: f64,
    pub final_g_mean_rls: f64,
    pub nrrls_w: Vec<f64>,
    pub batch_w: Vec<f64>,
    pub rls_w: Vec<f64>,
}

/// One trace row per training step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub step: usize,
    pub nrrls_w_l2: f64,
    pub batch_w_l2: f64,
    pub rel_diff: f64,
    pub rls_w_l2: f64,
}

fn split(ds: &Dataset, seed: u64) -> (Vec<usize>, Vec<usize>, bool) {
    match make_splits(ds, 1, seed) {
        Ok(plan) => {
            let (train, test) = plan.train_test(0, 1);
            (train, test, false)
        }
        Err(_) => {
            let all: Vec<usize> = (0..ds.len()).collect();
            (all.clone(), all, true)
        }
    }
}

fn test_g_mean(w: &Coefficients, test: &[LabeledSample], tau: f64) -> Result<f64> {
    let preds: Vec<_> = test.iter().map(|s| classify(predict(w, &s.x), tau)).collect();
    let truth: Vec<_> = test.iter().map(|s| s.y).collect();
    Ok(g_mean(&confusion(&preds, &truth)?))
}

/// Streams one training fold through NR-RLS and plain RLS while re-solving
/// the batch problem from scratch after every sample.
pub fn converge_trace(
    train: &[LabeledSample],
    hp: Hyperparams,
) -> Result<(Vec<TraceRow>, Coefficients, Coefficients, Coefficients)> {
    let mut nr = NrRls::new(hp)?;
    let mut rls = Rls::new(hp)?;
    let mut x_neg = Mat::with_cols(hp.dim);
    let mut x_pos = Mat::with_cols(hp.dim);
    let mut x_all = Mat::with_cols(hp.dim);
    let mut t_all = Vec::new();
    let mut rows = Vec::with_capacity(train.len());
    let mut batch_w = Coefficients::zeros(hp.dim);
    for (t, s) in train.iter().enumerate() {
        nr.step(s)?;
        rls.step(s)?;
        batch_w = match hp.weighting {
            Weighting::Rebalanced => {
                if s.y.sign() > 0.0 { &mut x_pos } else { &mut x_neg }.push_row(&s.x)?;
                batch_ter_solve_with(&x_neg, &x_pos, hp.b, hp.targets)?
            }
            Weighting::FixedBalanced => {
                x_all.push_row(&s.x)?;
                t_all.push(hp.targets.target(s.y));
                batch_ls_solve(&x_all, &t_all, hp.b)?
            }
        };
        rows.push(TraceRow {
            step: t + 1,
            nrrls_w_l2: nr.coefficients().l2_norm(),
            batch_w_l2: batch_w.l2_norm(),
            rel_diff: rel_diff(nr.coefficients(), &batch_w),
            rls_w_l2: rls.coefficients().l2_norm(),
        });
    }
    Ok((rows, nr.coefficients().clone(), batch_w, rls.coefficients().clone()))
}

/// Trajectory overlay on run 0 of the split plan, at the first configured order.
///
/// Writes `trace.csv`, `coefficients.csv` and `converge.json` into `cfg.out`.
pub fn cmd_converge(cfg: &RunConfig) -> Result<ConvergeReport> {
    cfg.validate(true)?;
    let ds = cfg.load_dataset()?;
    let (train_idx, test_idx, test_on_train) = split(&ds, cfg.seed);
    let scaler = match cfg.normalization {
        Normalization::Global => MinMaxScaler::fit(ds.x())?,
        Normalization::PerFold => MinMaxScaler::fit_rows(train_idx.iter().map(|&i| ds.row(i)))?,
    };
    let expander = PolyExpander::new(cfg.orders[0], ds.raw_dim(), cfg.expansion)?;
    let prep = |idx: &[usize]| -> Result<Vec<LabeledSample>> {
        idx.iter()
            .map(|&i| Ok(LabeledSample::new(expander.expand(&scaler.apply(ds.row(i))?)?, ds.labels()[i])))
            .collect()
    };
    let (train, test) = (prep(&train_idx)?, prep(&test_idx)?);
    if train.is_empty() {
        return Err(Error::EmptyFile);
    }
    let hp = Hyperparams::new(expander.output_dim()).with_b(cfg.b).with_weighting(cfg.weighting);
    let (rows, nr_w, batch_w, rls_w) = converge_trace(&train, hp)?;

    let mut trace = format!("{TRACE_HEADER}\n");
    for r in &rows {
        let _ = writeln!(
            trace,
            "{},{},{},{},{}",
            r.step,
            fmt_f64(r.nrrls_w_l2),
            fmt_f64(r.batch_w_l2),
            fmt_f64(r.rel_diff),
            fmt_f64(r.rls_w_l2)
        );
    }
    let mut coeffs = format!("{COEFFICIENTS_HEADER}\n");
    for i in 0..hp.dim {
        let _ = writeln!(coeffs, "{i},{},{},{}", fmt_f64(nr_w[i]), fmt_f64(batch_w[i]), fmt_f64(rls_w[i]));
    }

    let tau = hp.targets.tau;
    let report = ConvergeReport {
        dataset: ds.name.clone(),
        order: expander.order(),
        expansion: expander.mode(),
        dim: hp.dim,
        weighting: cfg.weighting,
        batch: match cfg.weighting {
            Weighting::Rebalanced => "ter_batch",
            Weighting::FixedBalanced => "ls_batch",
        },
        n_train: train.len(),
        n_test: test.len(),
        test_on_train,
        max_rel_diff: rows.iter().map(|r| r.rel_diff).fold(0.0, f64::max),
        final_g_mean_nrrls: test_g_mean(&nr_w, &test, tau)?,
        final_g_mean_batch: test_g_mean(&batch_w, &test, tau)?,
        final_g_mean_rls: test_g_mean(&rls_w, &test, tau)?,
        nrrls_w: nr_w.into_vec(),
        batch_w: batch_w.into_vec(),
        rls_w: rls_w.into_vec(),
    };
    std::fs::create_dir_all(&cfg.out).map_err(|e| Error::io(&cfg.out, e))?;
    write_file(cfg.out.join("trace.csv"), &trace)?;
    write_file(cfg.out.join("coefficients.csv"), &coeffs)?;
    write_json(cfg.out.join("converge.json"), &report)?;
    Ok(report)
}
