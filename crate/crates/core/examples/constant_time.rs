//! Per-step cost of NR-RLS stays flat while re-solving the batch problem at
//! each step grows with the number of samples seen.
//!
//! cargo run --release --example constant_time -- [n] [dim]

use nrrls::experiment::{cmd_bench, BenchConfig};

fn main() -> nrrls::Result<()> {
    let mut args = std::env::args().skip(1);
    let n = args.next().and_then(|a| a.parse().ok()).unwrap_or(6000);
    let dim = args.next().and_then(|a| a.parse().ok()).unwrap_or(20);
    let report = cmd_bench(&BenchConfig { n, dim, ..BenchConfig::default() })?;

    println!("n = {n}, d = {dim}, warmup = {}", report.warmup);
    let p = report.nrrls;
    println!(
        "nrrls  first decile {:>10.0} ns  last decile {:>10.0} ns  ratio {:.2}",
        p.first_decile_mean, p.last_decile_mean, p.ratio
    );
    if let Some(p) = report.batch {
        println!(
            "batch  first decile {:>10.0} ns  last decile {:>10.0} ns  ratio {:.2}",
            p.first_decile_mean, p.last_decile_mean, p.ratio
        );
    }
    Ok(())
}
