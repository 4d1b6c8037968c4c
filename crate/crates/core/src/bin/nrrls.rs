use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use nrrls::experiment::{
    cmd_bayes, cmd_bench, cmd_converge, cmd_demo2d, cmd_run, parse_orders, BayesConfig, BenchConfig, DemoConfig,
    RunConfig,
};
use nrrls::{Error, Result};

#[derive(Parser)]
#[command(name = "nrrls", version, about = "NR-RLS benchmark experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Repeated stratified 2-fold cross-validation over polynomial orders.
    Run(RunArgs),
    /// Per-step NR-RLS, batch and RLS coefficient trajectories.
    Converge(RunArgs),
    /// Per-step timing of NR-RLS and a batch recompute baseline.
    Bench(BenchArgs),
    /// LS against rebalanced LS on the 2-D overlapping demo.
    Demo2d(DemoArgs),
    /// Agreement with the closed-form weighted Bayes rule.
    Bayes(BayesArgs),
}

#[derive(Args)]
struct RunArgs {
    /// key=value file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Replay the configuration stored in a manifest.json; flags override it.
    #[arg(long, conflicts_with = "config")]
    manifest: Option<PathBuf>,
    #[arg(long)]
    data: Option<String>,
    /// csv or libsvm.
    #[arg(long)]
    format: Option<String>,
    /// nrrls, rls, ls_batch, ter_batch or nrrls_multiclass.
    #[arg(long)]
    algo: Option<String>,
    /// Order list such as `3`, `1,4` or `1-6`.
    #[arg(long)]
    order: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    runs: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// rebalanced or fixed.
    #[arg(long)]
    weighting: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    jobs: Option<String>,
    /// 0-based label column of delimited files.
    #[arg(long)]
    label_column: Option<String>,
    #[arg(long)]
    positive_label: Option<String>,
    /// Comma-separated 0-based columns to drop.
    #[arg(long)]
    ignore_columns: Option<String>,
    /// Minimum feature count for LIBSVM input.
    #[arg(long)]
    dim: Option<String>,
    /// full, powers or auto.
    #[arg(long)]
    expansion: Option<String>,
    /// global or per_fold.
    #[arg(long)]
    normalization: Option<String>,
    #[arg(long)]
    gmean_every: Option<String>,
}

impl RunArgs {
    fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match (&self.config, &self.manifest) {
            (Some(p), _) => RunConfig::from_file(p)?,
            (_, Some(p)) => RunConfig::from_manifest(p)?,
            _ => RunConfig::default(),
        };
        let flags = [
            ("data", &self.data),
            ("format", &self.format),
            ("algo", &self.algo),
            ("order", &self.order),
            ("b", &self.b),
            ("runs", &self.runs),
            ("seed", &self.seed),
            ("weighting", &self.weighting),
            ("out", &self.out),
            ("jobs", &self.jobs),
            ("label_column", &self.label_column),
            ("positive_label", &self.positive_label),
            ("ignore_columns", &self.ignore_columns),
            ("dim", &self.dim),
            ("expansion", &self.expansion),
            ("normalization", &self.normalization),
            ("gmean_every", &self.gmean_every),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.apply(key, v)?;
            }
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 20_000)]
    n: usize,
    #[arg(long, default_value_t = 20)]
    dim: usize,
    #[arg(long, default_value_t = 0.25)]
    ratio: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    warmup: usize,
    #[arg(long, default_value_t = nrrls::model::DEFAULT_RIDGE)]
    b: f64,
    /// Skip the batch recompute baseline.
    #[arg(long)]
    no_baseline: bool,
    /// Passes over the stream; each step keeps its fastest pass.
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DemoArgs {
    #[arg(long, default_value_t = nrrls::experiment::DEMO_SEED)]
    seed: u64,
    #[arg(long, default_value = "1,4")]
    order: String,
    #[arg(long, default_value_t = 0.3)]
    overlap: f64,
    #[arg(long, default_value_t = 101)]
    resolution: usize,
    #[arg(long, default_value_t = nrrls::model::DEFAULT_RIDGE)]
    b: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BayesArgs {
    #[arg(long, default_value_t = 5000)]
    n: usize,
    #[arg(long, default_value_t = 0.25)]
    ratio: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2.0)]
    sep: f64,
    #[arg(long, default_value_t = nrrls::model::DEFAULT_RIDGE)]
    b: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string(value).map_err(|e| Error::Validation(e.to_string()))?);
    Ok(())
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Run(a) => print_json(&cmd_run(&a.resolve()?)?),
        Command::Converge(a) => print_json(&cmd_converge(&a.resolve()?)?),
        Command::Bench(a) => print_json(&cmd_bench(&BenchConfig {
            n: a.n,
            dim: a.dim,
            ratio: a.ratio,
            seed: a.seed,
            warmup: a.warmup,
            b: a.b,
            baseline: !a.no_baseline,
            repeats: a.repeats,
            out: a.out,
        })?),
        Command::Demo2d(a) => print_json(&cmd_demo2d(&DemoConfig {
            seed: a.seed,
            orders: parse_orders(&a.order)?,
            overlap: a.overlap,
            resolution: a.resolution,
            b: a.b,
            out: a.out,
        })?),
        Command::Bayes(a) => print_json(&cmd_bayes(&BayesConfig {
            n: a.n,
            ratio: a.ratio,
            seed: a.seed,
            mean_sep: a.sep,
            b: a.b,
            out: a.out,
        })?),
    }
}

fn fail(kind: &str, code: i32, message: String) -> ExitCode {
    let line = serde_json::json!({ "error": kind, "code": code, "message": message });
    eprintln!("{line}");
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("validation", 2, e.to_string().lines().next().unwrap_or("").to_string()),
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e.kind(), e.exit_code(), e.to_string()),
    }
}
