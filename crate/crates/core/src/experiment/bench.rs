use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;

use super::{write_file, write_json};
use crate::data::gen_stream;
use crate::error::{Error, Result};
use crate::eval::{timing_profile, TimingProfile};
use crate::linalg::Mat;
use crate::model::{batch_ter_solve, Hyperparams, Label, NrRls, DEFAULT_RIDGE};

pub const MIN_BENCH_SAMPLES: usize = 2000;
pub const BENCH_HEADER: &str = "step,nrrls_nanos,batch_nanos";

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub n: usize,
    pub dim: usize,
    pub ratio: f64,
    pub seed: u64,
    pub warmup: usize,
    pub b: f64,
    /// Also time a from-scratch batch solve after every sample.
    pub baseline: bool,
    /// Passes over the stream; each step keeps its fastest pass.
    pub repeats: usize,
    pub out: Option<PathBuf>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            n: 20_000,
            dim: 20,
            ratio: 0.25,
            seed: 0,
            warmup: 200,
            b: DEFAULT_RIDGE,
            baseline: true,
            repeats: 3,
            out: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub n: usize,
    pub dim: usize,
    pub ratio: f64,
    pub seed: u64,
    pub warmup: usize,
    pub repeats: usize,
    pub nrrls: TimingProfile,
    pub batch: Option<TimingProfile>,
    #[serde(skip)]
    pub nrrls_nanos: Vec<u64>,
    #[serde(skip)]
    pub batch_nanos: Vec<u64>,
}

/// Per-step wall time of NR-RLS and of the batch recompute baseline on one
/// seeded stream, each step taking its minimum over `repeats` passes.
/// Writes `bench.csv` and `bench.json` when `out` is set.
pub fn cmd_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    if cfg.n < MIN_BENCH_SAMPLES {
        return Err(Error::Validation(format!("bench needs n >= {MIN_BENCH_SAMPLES}, got {}", cfg.n)));
    }
    if cfg.repeats == 0 {
        return Err(Error::Validation("repeats must be at least 1".into()));
    }
    if cfg.dim == 0 {
        return Err(Error::Validation("dim must be at least 1".into()));
    }
    let stream = gen_stream(cfg.n, cfg.dim, cfg.ratio, cfg.seed);
    let hp = Hyperparams::new(cfg.dim).with_b(cfg.b);

    let mut nrrls_nanos = vec![u64::MAX; cfg.n];
    let mut batch_nanos = if cfg.baseline { vec![u64::MAX; cfg.n] } else { Vec::new() };
    for _ in 0..cfg.repeats {
        let mut learner = NrRls::new(hp)?;
        for (slot, s) in nrrls_nanos.iter_mut().zip(&stream) {
            let start = Instant::now();
            learner.step(s)?;
            *slot = (*slot).min(start.elapsed().as_nanos() as u64);
        }
    }
    let baseline_passes = if cfg.baseline { cfg.repeats } else { 0 };
    for _ in 0..baseline_passes {
        let mut x_neg = Mat::with_cols(cfg.dim);
        let mut x_pos = Mat::with_cols(cfg.dim);
        for (slot, s) in batch_nanos.iter_mut().zip(&stream) {
            let start = Instant::now();
            match s.y {
                Label::Negative => x_neg.push_row(&s.x)?,
                Label::Positive => x_pos.push_row(&s.x)?,
            }
            std::hint::black_box(batch_ter_solve(&x_neg, &x_pos, cfg.b)?);
            *slot = (*slot).min(start.elapsed().as_nanos() as u64);
        }
    }

    let report = BenchReport {
        n: cfg.n,
        dim: cfg.dim,
        ratio: cfg.ratio,
        seed: cfg.seed,
        warmup: cfg.warmup,
        repeats: cfg.repeats,
        nrrls: timing_profile(&nrrls_nanos, cfg.warmup)?,
        batch: cfg.baseline.then(|| timing_profile(&batch_nanos, cfg.warmup)).transpose()?,
        nrrls_nanos,
        batch_nanos,
    };
    if let Some(out) = &cfg.out {
        std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
        let mut csv = format!("{BENCH_HEADER}\n");
        for (i, t) in report.nrrls_nanos.iter().enumerate() {
            let b = report.batch_nanos.get(i).map(u64::to_string).unwrap_or_default();
            let _ = writeln!(csv, "{},{t},{b}", i + 1);
        }
        write_file(out.join("bench.csv"), &csv)?;
        write_json(out.join("bench.json"), &report)?;
    }
    Ok(report)
}
