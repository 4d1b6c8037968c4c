//! Seeded synthetic data. Every generator is a pure function of its arguments.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::Dataset;
use crate::error::{Error, Result};
use crate::linalg::{dot, Mat};
use crate::model::{Label, LabeledSample};

/// Shared covariance of the two Gaussian classes, `[[1, ρ], [ρ, 1]]`.
const GAUSS_RHO: f64 = 0.5;

/// Linear decision rule `sign(wᵀx + c)` (ties positive).
#[derive(Debug, Clone, PartialEq)]
pub struct BayesRule {
    pub w: Vec<f64>,
    pub c: f64,
}

impl BayesRule {
    pub fn score(&self, x: &[f64]) -> f64 {
        dot(&self.w, x) + self.c
    }

    pub fn classify(&self, x: &[f64]) -> Label {
        if self.score(x) >= 0.0 {
            Label::Positive
        } else {
            Label::Negative
        }
    }
}

#[derive(Debug, Clone)]
pub struct GaussianData {
    pub dataset: Dataset,
    pub mean_neg: [f64; 2],
    pub mean_pos: [f64; 2],
    /// Closed-form class-weighted Bayes rule for weights `1/n⁻`, `1/n⁺`.
    pub bayes: BayesRule,
}

fn gauss_pair(rng: &mut ChaCha8Rng) -> [f64; 2] {
    // Cholesky factor of [[1, ρ], [ρ, 1]]
    let a: f64 = StandardNormal.sample(rng);
    let b: f64 = StandardNormal.sample(rng);
    [a, GAUSS_RHO * a + (1.0 - GAUSS_RHO * GAUSS_RHO).sqrt() * b]
}

/// Two 2-D Gaussians with covariance `[[1, ρ], [ρ, 1]]` and means
/// `±(mean_sep/2)·(1,1)/√2`. `n⁺ = round(n·ratio/(1+ratio))`.
///
/// With class weights `1/n±` and priors `n±/n` the weighted Bayes rule
/// compares class likelihoods directly, which for a shared covariance is the
/// linear discriminant `Σ⁻¹(μ⁺-μ⁻)·x - ½(μ⁺ᵀΣ⁻¹μ⁺ - μ⁻ᵀΣ⁻¹μ⁻)`.
pub fn gen_gaussian_imbalanced(n: usize, ratio: f64, mean_sep: f64, seed: u64) -> Result<GaussianData> {
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(Error::InvalidRatio(ratio));
    }
    if n < 10 {
        return Err(Error::Validation(format!("need n >= 10, got {n}")));
    }
    let n_pos = ((n as f64) * ratio / (1.0 + ratio)).round() as usize;
    let n_pos = n_pos.clamp(1, n - 1);
    let n_neg = n - n_pos;

    let h = mean_sep / 2.0 / std::f64::consts::SQRT_2;
    let mean_pos = [h, h];
    let mean_neg = [-h, -h];

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(n);
    for (count, mean, label) in [(n_neg, mean_neg, Label::Negative), (n_pos, mean_pos, Label::Positive)] {
        for _ in 0..count {
            let e = gauss_pair(&mut rng);
            samples.push(LabeledSample::new(vec![mean[0] + e[0], mean[1] + e[1]], label));
        }
    }
    samples.shuffle(&mut rng);
    let dataset = Dataset::from_samples("gaussian", &samples, 2)?;

    // Σ⁻¹ for [[1, ρ], [ρ, 1]]
    let det = 1.0 - GAUSS_RHO * GAUSS_RHO;
    let sinv = |v: [f64; 2]| [(v[0] - GAUSS_RHO * v[1]) / det, (v[1] - GAUSS_RHO * v[0]) / det];
    let diff = [mean_pos[0] - mean_neg[0], mean_pos[1] - mean_neg[1]];
    let w = sinv(diff).to_vec();
    let quad = |m: [f64; 2]| dot(&m, &sinv(m));
    let (prior_pos, prior_neg) = (n_pos as f64 / n as f64, n_neg as f64 / n as f64);
    let (weight_pos, weight_neg) = (1.0 / n_pos as f64, 1.0 / n_neg as f64);
    let log_odds = (prior_pos * weight_pos).ln() - (prior_neg * weight_neg).ln();
    let c = -0.5 * (quad(mean_pos) - quad(mean_neg)) + log_odds;

    Ok(GaussianData { dataset, mean_neg, mean_pos, bayes: BayesRule { w, c } })
}

/// Parameters of the 24-point overlapping demo (8 negatives, 16 positives).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapDemo {
    /// Width of the shared band along the first coordinate.
    pub overlap: f64,
}

impl Default for OverlapDemo {
    fn default() -> Self {
        OverlapDemo { overlap: 0.3 }
    }
}

pub const DEMO_NEGATIVES: usize = 8;
pub const DEMO_POSITIVES: usize = 16;

impl OverlapDemo {
    /// Negatives fill `[0.05, 0.5 + overlap/2]`, positives
    /// `[0.5 - overlap/2, 0.95]` along x₁; x₂ is uniform on `[0.05, 0.95]`.
    pub fn generate(&self, seed: u64) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let half = self.overlap.clamp(0.0, 0.9) / 2.0;
        let mut x = Mat::with_cols(2);
        let mut y = Vec::with_capacity(DEMO_NEGATIVES + DEMO_POSITIVES);
        for (count, lo, hi, label) in [
            (DEMO_NEGATIVES, 0.05, 0.5 + half, Label::Negative),
            (DEMO_POSITIVES, 0.5 - half, 0.95, Label::Positive),
        ] {
            for _ in 0..count {
                let p = [rng.random_range(lo..hi), rng.random_range(0.05..0.95)];
                x.push_row(&p).expect("two columns");
                y.push(label);
            }
        }
        Dataset::new("overlap-demo", x, y).expect("finite synthetic data")
    }
}

pub fn gen_overlap_demo(seed: u64) -> Dataset {
    OverlapDemo::default().generate(seed)
}

/// Random stream for timing and exactness checks: a leading constant 1
/// followed by `dim - 1` standard normal features, shifted by ±0.5 per class.
/// Each sample is positive with probability `ratio / (1 + ratio)`.
pub fn gen_stream(n: usize, dim: usize, ratio: f64, seed: u64) -> Vec<LabeledSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p_pos = ratio / (1.0 + ratio);
    (0..n)
        .map(|_| {
            let y = if rng.random_bool(p_pos.clamp(0.0, 1.0)) { Label::Positive } else { Label::Negative };
            let shift = 0.5 * y.sign();
            let mut x = Vec::with_capacity(dim);
            x.push(1.0);
            for _ in 1..dim {
                let e: f64 = StandardNormal.sample(&mut rng);
                x.push(e + shift);
            }
            LabeledSample::new(x, y)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_counts_and_determinism() {
        let g = gen_gaussian_imbalanced(5000, 0.25, 2.0, 1).unwrap();
        let n_pos = g.dataset.count(Label::Positive);
        assert!((999..=1001).contains(&n_pos), "{n_pos}");
        let again = gen_gaussian_imbalanced(5000, 0.25, 2.0, 1).unwrap();
        assert_eq!(g.dataset, again.dataset);
        assert!(matches!(gen_gaussian_imbalanced(100, 0.0, 1.0, 0), Err(Error::InvalidRatio(_))));
        assert!(matches!(gen_gaussian_imbalanced(100, -1.0, 1.0, 0), Err(Error::InvalidRatio(_))));
    }

    #[test]
    fn balanced_symmetric_boundary_is_bisector() {
        let g = gen_gaussian_imbalanced(100, 1.0, 3.0, 5).unwrap();
        // origin is the midpoint of the means
        assert!(g.bayes.c.abs() < 1e-12);
        let diff = [g.mean_pos[0] - g.mean_neg[0], g.mean_pos[1] - g.mean_neg[1]];
        // normal vector parallel to the mean difference
        let cross = g.bayes.w[0] * diff[1] - g.bayes.w[1] * diff[0];
        assert!(cross.abs() < 1e-12);
        assert_eq!(g.bayes.classify(&g.mean_pos), Label::Positive);
        assert_eq!(g.bayes.classify(&g.mean_neg), Label::Negative);
    }

    #[test]
    fn demo_counts() {
        let d = gen_overlap_demo(0);
        assert_eq!(d.count(Label::Negative), 8);
        assert_eq!(d.count(Label::Positive), 16);
        assert!(d.x().as_slice().iter().all(|v| (0.0..=1.0).contains(v)));
        assert_eq!(gen_overlap_demo(3), gen_overlap_demo(3));
    }

    #[test]
    fn stream_shape() {
        let s = gen_stream(50, 4, 1.0, 9);
        assert_eq!(s.len(), 50);
        assert!(s.iter().all(|x| x.x.len() == 4 && x.x[0] == 1.0));
        assert_eq!(s, gen_stream(50, 4, 1.0, 9));
    }
}
