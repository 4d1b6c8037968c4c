//! Repeated stratified 2-fold cross-validation with an order sweep, on a CSV
//! file (label in the last column) or on a generated Gaussian set.
//!
//! cargo run --release --example cross_validation -- [data.csv] [positive_label]

use std::fmt::Write as _;

use nrrls::data::gen_gaussian_imbalanced;
use nrrls::eval::Algorithm;
use nrrls::experiment::{cmd_run, RunConfig};

fn main() -> nrrls::Result<()> {
    let dir = tempfile::tempdir().expect("temp dir");
    let mut args = std::env::args().skip(1);
    let (data, positive) = match args.next() {
        Some(path) => (path.into(), args.next().unwrap_or_else(|| "1".into())),
        None => {
            let g = gen_gaussian_imbalanced(600, 0.2, 1.5, 4)?;
            let mut csv = String::from("x1,x2,label\n");
            for (i, y) in g.dataset.labels().iter().enumerate() {
                let r = g.dataset.row(i);
                let _ = writeln!(csv, "{},{},{}", r[0], r[1], y.as_i8());
            }
            let path = dir.path().join("gaussian.csv");
            std::fs::write(&path, csv).expect("write csv");
            (path, "1".to_string())
        }
    };
    let cfg = RunConfig {
        data: Some(data),
        positive_label: positive,
        algo: Algorithm::TerBatch,
        orders: vec![1, 2, 3],
        out: dir.path().join("run"),
        ..RunConfig::default()
    };
    let summary = cmd_run(&cfg)?;
    println!("{} ({} samples, ratio {:.2})", summary.dataset, summary.data.n, summary.data.imbalance_ratio);
    for o in &summary.orders {
        println!("order {} ({} features): G-mean {:.3} ± {:.3}", o.order, o.dim, o.g_mean_mean, o.g_mean_std);
    }
    println!("best order {} with {:.3}", summary.best_order, summary.best_g_mean);
    Ok(())
}
