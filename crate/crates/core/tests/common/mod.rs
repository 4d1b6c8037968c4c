#![allow(dead_code)]

use nrrls::model::{Label, LabeledSample};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Leading constant 1, then `d - 1` uniform features shifted by class.
pub fn random_stream(seed: u64, n: usize, d: usize, ratio: f64) -> Vec<LabeledSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p_pos = ratio / (1.0 + ratio);
    (0..n)
        .map(|_| {
            let y = if rng.random_bool(p_pos) { Label::Positive } else { Label::Negative };
            let mut x = vec![1.0];
            for _ in 1..d {
                x.push(rng.random::<f64>() + 0.3 * y.sign());
            }
            LabeledSample::new(x, y)
        })
        .collect()
}

/// Gaussian elimination with partial pivoting on a dense copy.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Vec<f64> {
    let n = rhs.len();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
        a.swap(k, p);
        rhs.swap(k, p);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
            rhs[i] -= f * rhs[k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| a[k][j] * x[j]).sum();
        x[k] = (rhs[k] - s) / a[k][k];
    }
    x
}

/// Normal equations of the ridge-regularized, optionally class-rebalanced
/// least-squares problem, accumulated sample by sample and solved from scratch.
pub struct Oracle {
    d: usize,
    b: f64,
    rebalanced: bool,
    gram: [Vec<Vec<f64>>; 2],
    moment: [Vec<f64>; 2],
    count: [usize; 2],
}

impl Oracle {
    pub fn new(d: usize, b: f64, rebalanced: bool) -> Self {
        Oracle {
            d,
            b,
            rebalanced,
            gram: [vec![vec![0.0; d]; d], vec![vec![0.0; d]; d]],
            moment: [vec![0.0; d], vec![0.0; d]],
            count: [0, 0],
        }
    }

    pub fn push(&mut self, s: &LabeledSample) {
        let c = (s.y == Label::Positive) as usize;
        let t = s.y.sign();
        for i in 0..self.d {
            for j in 0..self.d {
                self.gram[c][i][j] += s.x[i] * s.x[j];
            }
            self.moment[c][i] += s.x[i] * t;
        }
        self.count[c] += 1;
    }

    pub fn solve(&self) -> Vec<f64> {
        let mut a = vec![vec![0.0; self.d]; self.d];
        let mut rhs = vec![0.0; self.d];
        for c in 0..2 {
            if self.count[c] == 0 {
                continue;
            }
            let w = if self.rebalanced { 1.0 / self.count[c] as f64 } else { 1.0 };
            for i in 0..self.d {
                for j in 0..self.d {
                    a[i][j] += w * self.gram[c][i][j];
                }
                rhs[i] += w * self.moment[c][i];
            }
        }
        for (i, row) in a.iter_mut().enumerate() {
            row[i] += self.b;
        }
        gauss_solve(a, rhs)
    }
}

/// `‖a-b‖ / max(‖b‖, 1e-6)`; the floor keeps an exactly-zero reference meaningful.
pub fn rel(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let den: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    num / den.max(1e-6)
}
