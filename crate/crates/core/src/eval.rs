//! Confusion counts, G-mean, per-fold trajectories and step timing.

use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::model::{
    batch::{design, split_by_class},
    batch_ls_solve, batch_ter_solve_with, classify, predict, Coefficients, Hyperparams, Label,
    LabeledSample, NrRls, OneVsAll, Rls,
};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: u64,
    pub fn_: u64,
    pub tn: u64,
    pub fp: u64,
}

impl Confusion {
    pub fn new(tp: u64, fn_: u64, tn: u64, fp: u64) -> Self {
        Confusion { tp, fn_, tn, fp }
    }

    pub fn errors(&self) -> u64 {
        self.fn_ + self.fp
    }

    pub fn record(&mut self, pred: Label, truth: Label) {
        match (truth, pred) {
            (Label::Positive, Label::Positive) => self.tp += 1,
            (Label::Positive, Label::Negative) => self.fn_ += 1,
            (Label::Negative, Label::Negative) => self.tn += 1,
            (Label::Negative, Label::Positive) => self.fp += 1,
        }
    }
}

pub fn confusion(preds: &[Label], truth: &[Label]) -> Result<Confusion> {
    if preds.len() != truth.len() {
        return Err(Error::LengthMismatch { left: preds.len(), right: truth.len() });
    }
    if preds.is_empty() {
        return Err(Error::EmptyFile);
    }
    let mut c = Confusion::default();
    for (&p, &t) in preds.iter().zip(truth) {
        c.record(p, t);
    }
    Ok(c)
}

/// `√(TP/(TP+FN) · TN/(TN+FP))`; a class with no test samples contributes a factor of 1.
pub fn g_mean(c: &Confusion) -> f64 {
    let rate = |hit: u64, miss: u64| {
        let total = hit + miss;
        if total == 0 {
            1.0
        } else {
            hit as f64 / total as f64
        }
    };
    (rate(c.tp, c.fn_) * rate(c.tn, c.fp)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Nrrls,
    Rls,
    LsBatch,
    TerBatch,
    NrrlsMulticlass,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Nrrls => "nrrls",
            Algorithm::Rls => "rls",
            Algorithm::LsBatch => "ls_batch",
            Algorithm::TerBatch => "ter_batch",
            Algorithm::NrrlsMulticlass => "nrrls_multiclass",
        }
    }

    pub fn is_online(self) -> bool {
        !matches!(self, Algorithm::LsBatch | Algorithm::TerBatch)
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "nrrls" => Algorithm::Nrrls,
            "rls" => Algorithm::Rls,
            "ls_batch" => Algorithm::LsBatch,
            "ter_batch" => Algorithm::TerBatch,
            "nrrls_multiclass" => Algorithm::NrrlsMulticlass,
            other => return Err(Error::Validation(format!("unknown algorithm `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalRecord {
    pub step: usize,
    pub w_l2: f64,
    pub g_mean: Option<f64>,
    pub step_nanos: u64,
    pub w: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FoldOptions {
    /// Test G-mean every this many steps; `None` picks `max(1, n/200)`.
    pub gmean_every: Option<usize>,
    /// Keep a full coefficient snapshot in every record.
    pub keep_w: bool,
}

#[derive(Debug, Clone)]
pub struct FoldResult {
    pub records: Vec<EvalRecord>,
    pub final_g_mean: f64,
    pub confusion: Confusion,
    /// Final coefficients (for one-vs-all: the positive-class column).
    pub final_w: Coefficients,
}

#[allow(clippy::large_enum_variant)]
enum Online {
    Nr(NrRls),
    Rls(Rls),
    Ova(OneVsAll),
}

impl Online {
    fn new(algorithm: Algorithm, hp: Hyperparams) -> Result<Self> {
        Ok(match algorithm {
            Algorithm::Nrrls => Online::Nr(NrRls::new(hp)?),
            Algorithm::Rls => Online::Rls(Rls::new(hp)?),
            Algorithm::NrrlsMulticlass => Online::Ova(OneVsAll::new(2, hp)?),
            _ => unreachable!("batch algorithm"),
        })
    }

    fn step(&mut self, s: &LabeledSample) -> Result<()> {
        match self {
            Online::Nr(m) => m.step(s).map(|_| ()),
            Online::Rls(m) => m.step(s).map(|_| ()),
            Online::Ova(m) => m.step(&s.x, class_id(s.y)),
        }
    }

    fn classify(&self, x: &[f64], tau: f64) -> Label {
        match self {
            Online::Nr(m) => classify(m.score(x), tau),
            Online::Rls(m) => classify(predict(m.coefficients(), x), tau),
            Online::Ova(m) => {
                if m.predict(x) == 1 {
                    Label::Positive
                } else {
                    Label::Negative
                }
            }
        }
    }

    fn w(&self) -> Coefficients {
        match self {
            Online::Nr(m) => m.coefficients().clone(),
            Online::Rls(m) => m.coefficients().clone(),
            Online::Ova(m) => m.learner(1).expect("two classes").coefficients().clone(),
        }
    }

    fn w_l2(&self) -> f64 {
        match self {
            Online::Nr(m) => m.coefficients().l2_norm(),
            Online::Rls(m) => m.coefficients().l2_norm(),
            Online::Ova(m) => m.theta().as_slice().iter().map(|v| v * v).sum::<f64>().sqrt(),
        }
    }
}

/// Binary labels as one-vs-all class ids: negative is 0, positive is 1.
pub fn class_id(y: Label) -> usize {
    (y == Label::Positive) as usize
}

fn evaluate(test: &[LabeledSample], mut classify: impl FnMut(&[f64]) -> Label) -> Confusion {
    let mut c = Confusion::default();
    for s in test {
        c.record(classify(&s.x), s.y);
    }
    c
}

/// Trains on `train` one sample at a time (or once, for batch algorithms)
/// and evaluates on `test`.
pub fn run_fold(
    train: &[LabeledSample],
    test: &[LabeledSample],
    algorithm: Algorithm,
    hp: Hyperparams,
    opts: FoldOptions,
) -> Result<FoldResult> {
    if train.is_empty() || test.is_empty() {
        return Err(Error::Validation("train and test folds must be non-empty".into()));
    }
    let tau = hp.targets.tau;
    if !algorithm.is_online() {
        let start = Instant::now();
        let w = match algorithm {
            Algorithm::TerBatch => {
                let (neg, pos) = split_by_class(train, hp.dim)?;
                batch_ter_solve_with(&neg, &pos, hp.b, hp.targets)?
            }
            _ => {
                let (x, _) = design(train, hp.dim)?;
                let y: Vec<f64> = train.iter().map(|s| hp.targets.target(s.y)).collect();
                batch_ls_solve(&x, &y, hp.b)?
            }
        };
        let nanos = start.elapsed().as_nanos() as u64;
        let conf = evaluate(test, |x| classify(predict(&w, x), tau));
        let g = g_mean(&conf);
        let record = EvalRecord {
            step: train.len(),
            w_l2: w.l2_norm(),
            g_mean: Some(g),
            step_nanos: nanos,
            w: opts.keep_w.then(|| w.to_vec()),
        };
        return Ok(FoldResult { records: vec![record], final_g_mean: g, confusion: conf, final_w: w });
    }

    let every = opts.gmean_every.unwrap_or((train.len() / 200).max(1)).max(1);
    let mut learner = Online::new(algorithm, hp)?;
    let mut records = Vec::with_capacity(train.len());
    for (t, s) in train.iter().enumerate() {
        let start = Instant::now();
        learner.step(s)?;
        let nanos = start.elapsed().as_nanos() as u64;
        let step = t + 1;
        let g = (step % every == 0 || step == train.len())
            .then(|| g_mean(&evaluate(test, |x| learner.classify(x, tau))));
        records.push(EvalRecord {
            step,
            w_l2: learner.w_l2(),
            g_mean: g,
            step_nanos: nanos,
            w: opts.keep_w.then(|| learner.w().into_vec()),
        });
    }
    let conf = evaluate(test, |x| learner.classify(x, tau));
    Ok(FoldResult { records, final_g_mean: g_mean(&conf), confusion: conf, final_w: learner.w() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingProfile {
    pub first_decile_mean: f64,
    pub last_decile_mean: f64,
    pub ratio: f64,
}

pub const MIN_TIMING_RECORDS: usize = 1000;

/// Mean step time of the first and last tenth of `nanos[warmup..]`.
pub fn timing_profile(nanos: &[u64], warmup: usize) -> Result<TimingProfile> {
    if nanos.len() < MIN_TIMING_RECORDS {
        return Err(Error::TooFewRecords { needed: MIN_TIMING_RECORDS, got: nanos.len() });
    }
    let body = nanos.get(warmup..).unwrap_or(&[]);
    let decile = body.len() / 10;
    if decile == 0 {
        return Err(Error::TooFewRecords { needed: warmup + 10, got: nanos.len() });
    }
    let mean = |s: &[u64]| s.iter().map(|&v| v as f64).sum::<f64>() / s.len() as f64;
    let first = mean(&body[..decile]);
    let last = mean(&body[body.len() - decile..]);
    Ok(TimingProfile { first_decile_mean: first, last_decile_mean: last, ratio: last / first })
}

pub fn timing_profile_records(records: &[EvalRecord], warmup: usize) -> Result<TimingProfile> {
    let nanos: Vec<u64> = records.iter().map(|r| r.step_nanos).collect();
    timing_profile(&nanos, warmup)
}

/// 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub const RECORDS_HEADER: &str = "order,run,fold,step,w_l2,g_mean,step_nanos";

/// Appends records as `order,run,fold,step,w_l2,g_mean,step_nanos` rows; a
/// missing G-mean is an empty field.
pub fn write_records_csv(out: &mut String, order: usize, run: usize, fold: usize, records: &[EvalRecord]) {
    for r in records {
        let g = r.g_mean.map(fmt_f64).unwrap_or_default();
        let _ = writeln!(out, "{order},{run},{fold},{},{},{g},{}", r.step, fmt_f64(r.w_l2), r.step_nanos);
    }
}

/// Population mean and standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Scores of `w` on a `[0,1]²`-style grid, row-major over `(gx, gy)`.
pub fn score_grid(w: &Coefficients, points: &Mat) -> Vec<f64> {
    points.row_iter().map(|p| predict(w, p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{Negative as N, Positive as P};

    #[test]
    fn confusion_examples() {
        let truth = [P, N, P, N, N];
        let c = confusion(&truth, &truth).unwrap();
        assert_eq!((c.fn_, c.fp), (0, 0));
        let flipped: Vec<_> = truth.iter().map(|l| l.flip()).collect();
        let c = confusion(&flipped, &truth).unwrap();
        assert_eq!((c.tp, c.tn), (0, 0));
        let c = confusion(&[P, P, N, N], &[P, N, N, P]).unwrap();
        assert_eq!(c, Confusion::new(1, 1, 1, 1));
        assert!(confusion(&[P], &[P, N]).is_err());
        assert!(confusion(&[], &[]).is_err());
    }

    #[test]
    fn g_mean_examples() {
        assert_eq!(g_mean(&Confusion::new(5, 0, 7, 0)), 1.0);
        assert_eq!(g_mean(&Confusion::new(0, 5, 7, 0)), 0.0);
        let g = g_mean(&Confusion::new(3, 1, 4, 1));
        assert!((g - (0.75f64 * 0.8).sqrt()).abs() < 1e-15);
        assert!((g - 0.7745966692414834).abs() < 1e-12);
    }

    #[test]
    fn g_mean_empty_class() {
        assert_eq!(g_mean(&Confusion::new(3, 1, 0, 0)), 0.75f64.sqrt());
        assert_eq!(g_mean(&Confusion::default()), 1.0);
    }

    #[test]
    fn timing_constant_and_linear() {
        let flat = vec![100u64; 2000];
        assert_eq!(timing_profile(&flat, 0).unwrap().ratio, 1.0);
        let linear: Vec<u64> = (1..=10_000).collect();
        let p = timing_profile(&linear, 0).unwrap();
        assert_eq!(p.first_decile_mean, 500.5);
        assert_eq!(p.last_decile_mean, 9500.5);
        assert!((p.ratio - 18.98). abs() < 0.01);
        assert!(matches!(timing_profile(&flat[..999], 0), Err(Error::TooFewRecords { .. })));
    }

    #[test]
    fn records_csv_format() {
        let mut out = String::new();
        let recs = [
            EvalRecord { step: 1, w_l2: 0.5, g_mean: None, step_nanos: 12, w: None },
            EvalRecord { step: 2, w_l2: 1.0 / 3.0, g_mean: Some(1.0), step_nanos: 7, w: None },
        ];
        write_records_csv(&mut out, 3, 0, 1, &recs);
        let lines: Vec<_> = out.lines().collect();
        assert_eq!(lines[0], "3,0,1,1,5.0000000000000000e-1,,12");
        assert_eq!(lines[1], "3,0,1,2,3.3333333333333331e-1,1.0000000000000000e0,7");
    }

    #[test]
    fn mean_std_population() {
        let (m, s) = mean_std(&[1.0, 3.0]);
        assert_eq!((m, s), (2.0, 1.0));
    }
}
