//! With fixed, equal class weights NR-RLS no longer rebalances and follows
//! ordinary recursive least squares and the ridge LS solution step by step.
//!
//! cargo run --example ls_reduction

use nrrls::data::gen_stream;
use nrrls::linalg::{rel_diff, Mat};
use nrrls::model::{batch_ls_solve, Hyperparams, NrRls, Rls, Weighting};

fn main() -> nrrls::Result<()> {
    let dim = 5;
    let hp = Hyperparams::new(dim).with_weighting(Weighting::FixedBalanced);
    let mut nr = NrRls::new(hp)?;
    let mut rls = Rls::new(hp)?;
    let mut x = Mat::with_cols(dim);
    let mut y = Vec::new();

    let (mut nr_rls, mut nr_ls) = (0.0f64, 0.0f64);
    for s in gen_stream(300, dim, 0.25, 3) {
        nr.step(&s)?;
        rls.step(&s)?;
        x.push_row(&s.x)?;
        y.push(s.y.sign());
        let ls = batch_ls_solve(&x, &y, hp.b)?;
        nr_rls = nr_rls.max(rel_diff(nr.coefficients(), rls.coefficients()));
        nr_ls = nr_ls.max(rel_diff(nr.coefficients(), &ls));
    }
    println!("final w      {:?}", nr.coefficients().as_slice());
    println!("max rel diff NR-RLS vs RLS      {nr_rls:.2e}");
    println!("max rel diff NR-RLS vs batch LS {nr_ls:.2e}");
    Ok(())
}
