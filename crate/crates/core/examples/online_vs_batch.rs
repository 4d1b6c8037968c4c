//! Streams an imbalanced sample sequence through NR-RLS and re-solves the
//! class-rebalanced batch problem after every arrival. The two coefficient
//! vectors agree at every step.
//!
//! cargo run --example online_vs_batch

use nrrls::data::gen_stream;
use nrrls::linalg::{rel_diff, Mat};
use nrrls::model::{batch_ter_solve, Hyperparams, Label, NrRls};

fn main() -> nrrls::Result<()> {
    let dim = 8;
    let stream = gen_stream(400, dim, 0.1, 7);
    let mut learner = NrRls::new(Hyperparams::new(dim))?;
    let (mut x_neg, mut x_pos) = (Mat::with_cols(dim), Mat::with_cols(dim));

    let mut worst = 0.0f64;
    for (t, s) in stream.iter().enumerate() {
        let online = learner.step(s)?.clone();
        match s.y {
            Label::Negative => x_neg.push_row(&s.x)?,
            Label::Positive => x_pos.push_row(&s.x)?,
        }
        let batch = batch_ter_solve(&x_neg, &x_pos, 1e-4)?;
        let gap = rel_diff(&online, &batch);
        worst = worst.max(gap);
        if (t + 1) % 100 == 0 {
            println!("step {:>4}  |w| = {:.6}  rel diff = {gap:.2e}", t + 1, online.l2_norm());
        }
    }
    let c = learner.counts();
    println!("negatives {}  positives {}  max rel diff {worst:.2e}", c.n_neg, c.n_pos);
    Ok(())
}
