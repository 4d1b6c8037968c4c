//! Order-1 NR-RLS on two shared-covariance Gaussians (one positive for every
//! four negatives) and its agreement with the closed-form weighted Bayes rule.
//!
//! cargo run --release --example bayes_recovery

use nrrls::experiment::{cmd_bayes, BayesConfig};

fn main() -> nrrls::Result<()> {
    let mut total = 0.0;
    for seed in 0..5 {
        let r = cmd_bayes(&BayesConfig { seed, ..BayesConfig::default() })?;
        let w = &r.learned_w;
        println!(
            "seed {seed}: agreement {:.4}  learned boundary {:.3} + {:.3} x1 + {:.3} x2 = 0",
            r.agreement, w[0], w[1], w[2]
        );
        total += r.agreement;
    }
    println!("mean agreement {:.4}", total / 5.0);
    Ok(())
}
