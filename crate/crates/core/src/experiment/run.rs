use rayon::prelude::*;
use serde::Serialize;

use super::{build_pool, write_file, write_json, Normalization, RunConfig};
use crate::data::{make_splits, Dataset, DatasetSummary, SplitPlan, FOLDS};
use crate::error::Result;
use crate::eval::{mean_std, run_fold, write_records_csv, Algorithm, FoldOptions, FoldResult, RECORDS_HEADER};
use crate::features::{ExpansionMode, MinMaxScaler, PolyExpander};
use crate::model::{Hyperparams, LabeledSample, Weighting};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderSummary {
    pub order: usize,
    /// Expansion actually used (never `auto`).
    pub expansion: ExpansionMode,
    pub dim: usize,
    pub g_mean_mean: f64,
    /// Population std over the `runs × folds` fold results.
    pub g_mean_std: f64,
    /// Fold results ordered by run, then test fold.
    pub fold_g_means: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub dataset: String,
    pub data: DatasetSummary,
    pub algorithm: Algorithm,
    pub weighting: Weighting,
    pub b: f64,
    pub runs: usize,
    pub folds: usize,
    pub orders: Vec<OrderSummary>,
    pub best_order: usize,
    pub best_g_mean: f64,
}

#[derive(Debug, Clone, Serialize)]
struct Resolved {
    normalization: Normalization,
    stratified: bool,
    folds: usize,
    std: &'static str,
    seed: u64,
    expansions: Vec<(usize, ExpansionMode, usize)>,
    data: DatasetSummary,
}

#[derive(Debug, Clone, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config: &'a RunConfig,
    resolved: Resolved,
}

/// Scaled and expanded samples for `idx`.
fn prepare(ds: &Dataset, idx: &[usize], scaler: &MinMaxScaler, expander: &PolyExpander) -> Result<Vec<LabeledSample>> {
    idx.iter()
        .map(|&i| Ok(LabeledSample::new(expander.expand(&scaler.apply(ds.row(i))?)?, ds.labels()[i])))
        .collect()
}

struct Job {
    order_slot: usize,
    run: usize,
    test_fold: usize,
}

fn run_job(
    cfg: &RunConfig,
    ds: &Dataset,
    plan: &SplitPlan,
    global: Option<&MinMaxScaler>,
    expander: &PolyExpander,
    job: &Job,
) -> Result<FoldResult> {
    let (train_idx, test_idx) = plan.train_test(job.run, job.test_fold);
    let fitted;
    let scaler = match global {
        Some(s) => s,
        None => {
            fitted = MinMaxScaler::fit_rows(train_idx.iter().map(|&i| ds.row(i)))?;
            &fitted
        }
    };
    let train = prepare(ds, &train_idx, scaler, expander)?;
    let test = prepare(ds, &test_idx, scaler, expander)?;
    let hp = Hyperparams::new(expander.output_dim()).with_b(cfg.b).with_weighting(cfg.weighting);
    let opts = FoldOptions { gmean_every: cfg.gmean_every, keep_w: false };
    run_fold(&train, &test, cfg.algo, hp, opts)
}

/// Results per order slot, each ordered by `(run, test_fold)`.
struct Sweep {
    expanders: Vec<PolyExpander>,
    results: Vec<Vec<FoldResult>>,
}

fn sweep(cfg: &RunConfig, ds: &Dataset, plan: &SplitPlan) -> Result<Sweep> {
    let global = match cfg.normalization {
        Normalization::Global => Some(MinMaxScaler::fit(ds.x())?),
        Normalization::PerFold => None,
    };
    let expanders: Vec<PolyExpander> = cfg
        .orders
        .iter()
        .map(|&r| PolyExpander::new(r, ds.raw_dim(), cfg.expansion))
        .collect::<Result<_>>()?;
    let jobs: Vec<Job> = (0..expanders.len())
        .flat_map(|order_slot| {
            (0..cfg.runs).flat_map(move |run| (0..FOLDS).map(move |test_fold| Job { order_slot, run, test_fold }))
        })
        .collect();
    let pool = build_pool(cfg.jobs)?;
    let flat: Vec<FoldResult> = pool.install(|| {
        jobs.par_iter()
            .map(|job| run_job(cfg, ds, plan, global.as_ref(), &expanders[job.order_slot], job))
            .collect::<Result<_>>()
    })?;
    let per_order = cfg.runs * FOLDS;
    let mut results = Vec::with_capacity(expanders.len());
    let mut it = flat.into_iter();
    for _ in 0..expanders.len() {
        results.push(it.by_ref().take(per_order).collect());
    }
    Ok(Sweep { expanders, results })
}

/// Repeated stratified 2-fold cross-validation over every configured order.
///
/// Writes `summary.json`, `records.csv`, `manifest.json` and `splits.txt`
/// into `cfg.out`.
pub fn cmd_run(cfg: &RunConfig) -> Result<RunSummary> {
    cfg.validate(true)?;
    let ds = cfg.load_dataset()?;
    let plan = make_splits(&ds, cfg.runs, cfg.seed)?;
    let sweep = sweep(cfg, &ds, &plan)?;

    let mut records = format!("{RECORDS_HEADER}\n");
    let mut orders = Vec::new();
    for (expander, folds) in sweep.expanders.iter().zip(&sweep.results) {
        for (k, res) in folds.iter().enumerate() {
            write_records_csv(&mut records, expander.order(), k / FOLDS, k % FOLDS, &res.records);
        }
        let g: Vec<f64> = folds.iter().map(|f| f.final_g_mean).collect();
        let (mean, std) = mean_std(&g);
        orders.push(OrderSummary {
            order: expander.order(),
            expansion: expander.mode(),
            dim: expander.output_dim(),
            g_mean_mean: mean,
            g_mean_std: std,
            fold_g_means: g,
        });
    }
    let best = orders
        .iter()
        .fold(&orders[0], |best, o| if o.g_mean_mean > best.g_mean_mean { o } else { best });
    let summary = RunSummary {
        dataset: ds.name.clone(),
        data: ds.summary(),
        algorithm: cfg.algo,
        weighting: cfg.weighting,
        b: cfg.b,
        runs: cfg.runs,
        folds: FOLDS,
        best_order: best.order,
        best_g_mean: best.g_mean_mean,
        orders,
    };
    let manifest = Manifest {
        tool: "nrrls",
        version: env!("CARGO_PKG_VERSION"),
        command: "run",
        config: cfg,
        resolved: Resolved {
            normalization: cfg.normalization,
            stratified: true,
            folds: FOLDS,
            std: "population over runs x folds",
            seed: cfg.seed,
            expansions: sweep.expanders.iter().map(|e| (e.order(), e.mode(), e.output_dim())).collect(),
            data: ds.summary(),
        },
    };

    std::fs::create_dir_all(&cfg.out).map_err(|e| crate::error::Error::io(&cfg.out, e))?;
    write_json(cfg.out.join("summary.json"), &summary)?;
    write_file(cfg.out.join("records.csv"), &records)?;
    write_json(cfg.out.join("manifest.json"), &manifest)?;
    write_file(cfg.out.join("splits.txt"), &plan.export())?;
    Ok(summary)
}
