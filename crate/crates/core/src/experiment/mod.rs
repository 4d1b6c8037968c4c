//! Experiment drivers behind the `nrrls` binary. Each `cmd_*` function
//! returns its report and, given an output directory, writes the CSV/JSON
//! files documented on it.

use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

mod bayes;
mod bench;
mod config;
mod converge;
mod demo;
mod run;

pub use bayes::{cmd_bayes, BayesConfig, BayesReport, MIN_BAYES_SAMPLES};
pub use bench::{cmd_bench, BenchConfig, BenchReport, BENCH_HEADER, MIN_BENCH_SAMPLES};
pub use config::{parse_orders, DataFormat, Normalization, RunConfig};
pub use converge::{cmd_converge, converge_trace, ConvergeReport, TraceRow, COEFFICIENTS_HEADER, TRACE_HEADER};
pub use demo::{cmd_demo2d, DemoConfig, DemoReport, SolverResult, DEMO_SEED, ERRORS_HEADER, GRID_HEADER, POINTS_HEADER};
pub use run::{cmd_run, OrderSummary, RunSummary};

pub(crate) fn write_file(path: impl AsRef<Path>, contents: &str) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Validation(e.to_string()))?;
    text.push('\n');
    write_file(path, &text)
}

pub(crate) fn build_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Validation(format!("thread pool: {e}")))
}
