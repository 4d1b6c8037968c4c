use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;

use super::{write_file, write_json};
use crate::data::OverlapDemo;
use crate::error::{Error, Result};
use crate::eval::{confusion, fmt_f64, g_mean, score_grid};
use crate::features::{ExpansionMode, PolyExpander};
use crate::linalg::Mat;
use crate::model::{batch_ls_solve, batch_ter_solve, classify, predict, Label, DEFAULT_RIDGE};

pub const GRID_HEADER: &str = "order,solver,gx,gy,score";
pub const POINTS_HEADER: &str = "x1,x2,label";
pub const ERRORS_HEADER: &str = "order,solver,errors,g_mean";

/// Default demo seed; at orders 1 and 4 its TER error count is at most the LS count.
pub const DEMO_SEED: u64 = 15;

#[derive(Debug, Clone, PartialEq)]
pub struct DemoConfig {
    pub seed: u64,
    pub orders: Vec<usize>,
    pub overlap: f64,
    /// Grid points per axis.
    pub resolution: usize,
    pub b: f64,
    pub out: Option<PathBuf>,
}

impl Default for DemoConfig {
    fn default() -> Self {
        DemoConfig {
            seed: DEMO_SEED,
            orders: vec![1, 4],
            overlap: OverlapDemo::default().overlap,
            resolution: 101,
            b: DEFAULT_RIDGE,
            out: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverResult {
    pub order: usize,
    pub solver: &'static str,
    pub errors: u64,
    pub g_mean: f64,
    pub w: Vec<f64>,
    /// Scores at `grid_axis[i], grid_axis[j]`, row-major in `(i, j)`.
    #[serde(skip)]
    pub grid: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoReport {
    pub seed: u64,
    pub overlap: f64,
    pub n_neg: usize,
    pub n_pos: usize,
    pub results: Vec<SolverResult>,
    #[serde(skip)]
    pub grid_axis: Vec<f64>,
}

/// Unweighted LS against class-rebalanced LS on the small overlapping demo,
/// with decision-score grids over `[0,1]²`.
pub fn cmd_demo2d(cfg: &DemoConfig) -> Result<DemoReport> {
    if cfg.resolution < 2 {
        return Err(Error::Validation("grid resolution must be at least 2".into()));
    }
    let ds = OverlapDemo { overlap: cfg.overlap }.generate(cfg.seed);
    let axis: Vec<f64> = (0..cfg.resolution).map(|i| i as f64 / (cfg.resolution - 1) as f64).collect();
    let truth = ds.labels();

    let mut results = Vec::new();
    for &order in &cfg.orders {
        let ex = PolyExpander::new(order, 2, ExpansionMode::FullMultinomial)?;
        let mut x = Mat::with_cols(ex.output_dim());
        let (mut x_neg, mut x_pos) = (Mat::with_cols(ex.output_dim()), Mat::with_cols(ex.output_dim()));
        for (i, &y) in truth.iter().enumerate() {
            let row = ex.expand(ds.row(i))?;
            x.push_row(&row)?;
            match y {
                Label::Negative => x_neg.push_row(&row)?,
                Label::Positive => x_pos.push_row(&row)?,
            }
        }
        let mut grid_pts = Mat::with_cols(ex.output_dim());
        for &gx in &axis {
            for &gy in &axis {
                grid_pts.push_row(&ex.expand(&[gx, gy])?)?;
            }
        }
        let targets: Vec<f64> = truth.iter().map(|y| y.sign()).collect();
        for (solver, w) in [("ls", batch_ls_solve(&x, &targets, cfg.b)?), ("ter", batch_ter_solve(&x_neg, &x_pos, cfg.b)?)] {
            let preds: Vec<Label> = x.row_iter().map(|r| classify(predict(&w, r), 0.0)).collect();
            let conf = confusion(&preds, truth)?;
            results.push(SolverResult {
                order,
                solver,
                errors: conf.errors(),
                g_mean: g_mean(&conf),
                grid: score_grid(&w, &grid_pts),
                w: w.into_vec(),
            });
        }
    }

    let report = DemoReport {
        seed: cfg.seed,
        overlap: cfg.overlap,
        n_neg: ds.count(Label::Negative),
        n_pos: ds.count(Label::Positive),
        results,
        grid_axis: axis,
    };
    if let Some(out) = &cfg.out {
        std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
        let mut points = format!("{POINTS_HEADER}\n");
        for (i, y) in truth.iter().enumerate() {
            let p = ds.row(i);
            let _ = writeln!(points, "{},{},{y}", fmt_f64(p[0]), fmt_f64(p[1]));
        }
        let mut grid = format!("{GRID_HEADER}\n");
        let mut errors = format!("{ERRORS_HEADER}\n");
        for r in &report.results {
            let n = report.grid_axis.len();
            for (k, s) in r.grid.iter().enumerate() {
                let (gx, gy) = (report.grid_axis[k / n], report.grid_axis[k % n]);
                let _ = writeln!(grid, "{},{},{},{},{}", r.order, r.solver, fmt_f64(gx), fmt_f64(gy), fmt_f64(*s));
            }
            let _ = writeln!(errors, "{},{},{},{}", r.order, r.solver, r.errors, fmt_f64(r.g_mean));
        }
        write_file(out.join("demo_points.csv"), &points)?;
        write_file(out.join("demo_grid.csv"), &grid)?;
        write_file(out.join("demo_errors.csv"), &errors)?;
        write_json(out.join("demo.json"), &report)?;
    }
    Ok(report)
}
