//! One-vs-all NR-RLS on three Gaussian blobs of very different sizes.
//!
//! cargo run --example multiclass

use nrrls::model::{Hyperparams, OneVsAll};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

const CENTERS: [[f64; 2]; 3] = [[0.0, 0.0], [2.5, 0.0], [0.0, 2.5]];
const SHARE: [f64; 3] = [0.7, 0.2, 0.1];

fn draw(rng: &mut ChaCha8Rng) -> (Vec<f64>, usize) {
    let u: f64 = rng.random();
    let class = if u < SHARE[0] { 0 } else if u < SHARE[0] + SHARE[1] { 1 } else { 2 };
    let noise = Normal::new(0.0, 0.8).unwrap();
    let c = CENTERS[class];
    (vec![1.0, c[0] + noise.sample(rng), c[1] + noise.sample(rng)], class)
}

fn main() -> nrrls::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut model = OneVsAll::new(3, Hyperparams::new(3))?;
    for _ in 0..3000 {
        let (x, c) = draw(&mut rng);
        model.step(&x, c)?;
    }

    let mut hits = [0usize; 3];
    let mut totals = [0usize; 3];
    for _ in 0..3000 {
        let (x, c) = draw(&mut rng);
        totals[c] += 1;
        hits[c] += (model.predict(&x) == c) as usize;
    }
    let theta = model.theta();
    for c in 0..3 {
        let col: Vec<f64> = (0..theta.rows()).map(|i| theta[(i, c)]).collect();
        println!("class {c}: recall {:.3}  theta column {col:.3?}", hits[c] as f64 / totals[c] as f64);
    }
    Ok(())
}
