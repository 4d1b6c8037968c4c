//! Plain LS against class-rebalanced LS on a 24-point overlapping set with
//! twice as many positives as negatives. Pass a directory to also write the
//! score grids and points as CSV.
//!
//! cargo run --example imbalanced_demo -- [out_dir]

use nrrls::experiment::{cmd_demo2d, DemoConfig};

fn main() -> nrrls::Result<()> {
    let out = std::env::args().nth(1).map(Into::into);
    let report = cmd_demo2d(&DemoConfig { out, ..DemoConfig::default() })?;
    println!("seed {}  {} negatives, {} positives", report.seed, report.n_neg, report.n_pos);
    println!("order solver errors g-mean");
    for r in &report.results {
        println!("{:>5} {:>6} {:>6} {:.3}", r.order, r.solver, r.errors, r.g_mean);
    }
    Ok(())
}
