use super::{Hyperparams, Label, NrRls};
use crate::error::{Error, Result};
use crate::linalg::Mat;

/// One-vs-all multiclass learner: one [`NrRls`] per class id `0..c`.
#[derive(Debug, Clone)]
pub struct OneVsAll {
    learners: Vec<NrRls>,
}

impl OneVsAll {
    pub fn new(num_classes: usize, hp: Hyperparams) -> Result<Self> {
        if num_classes < 2 {
            return Err(Error::Validation(format!("need at least 2 classes, got {num_classes}")));
        }
        let learners = (0..num_classes).map(|_| NrRls::new(hp)).collect::<Result<_>>()?;
        Ok(OneVsAll { learners })
    }

    pub fn num_classes(&self) -> usize {
        self.learners.len()
    }

    pub fn dim(&self) -> usize {
        self.learners[0].dim()
    }

    pub fn learner(&self, class: usize) -> Option<&NrRls> {
        self.learners.get(class)
    }

    /// Feeds `x` as positive to `class`'s learner and negative to the rest.
    pub fn step(&mut self, x: &[f64], class: usize) -> Result<()> {
        if class >= self.learners.len() {
            return Err(Error::UnknownClass(class));
        }
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        // a failure in a later learner would leave earlier ones advanced
        let mut next = self.learners.clone();
        for (i, learner) in next.iter_mut().enumerate() {
            let y = if i == class { Label::Positive } else { Label::Negative };
            learner.update(x, y)?;
        }
        self.learners = next;
        Ok(())
    }

    /// `Θ = [w¹ … wᶜ]`, a `d × c` matrix.
    pub fn theta(&self) -> Mat {
        let d = self.dim();
        let c = self.learners.len();
        let mut theta = Mat::zeros(d, c);
        for (j, learner) in self.learners.iter().enumerate() {
            for (i, &w) in learner.coefficients().iter().enumerate() {
                theta[(i, j)] = w;
            }
        }
        theta
    }

    pub fn scores(&self, x: &[f64]) -> Vec<f64> {
        self.learners.iter().map(|l| l.score(x)).collect()
    }

    /// Class with the largest score; ties go to the lowest id.
    pub fn predict(&self, x: &[f64]) -> usize {
        let scores = self.scores(x);
        let mut best = 0;
        for (i, &s) in scores.iter().enumerate().skip(1) {
            if s > scores[best] {
                best = i;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_class_rejected() {
        let mut m = OneVsAll::new(3, Hyperparams::new(2)).unwrap();
        assert!(matches!(m.step(&[1.0, 0.0], 3), Err(Error::UnknownClass(3))));
        assert!(OneVsAll::new(1, Hyperparams::new(2)).is_err());
    }

    #[test]
    fn single_class_seen_predicts_it() {
        let mut m = OneVsAll::new(3, Hyperparams::new(3)).unwrap();
        let pts = [[1.0, 0.2, 0.4], [1.0, 0.5, 0.1], [1.0, 0.9, 0.7]];
        for p in &pts {
            m.step(p, 1).unwrap();
        }
        for p in &pts {
            assert_eq!(m.predict(p), 1);
        }
    }

    #[test]
    fn ties_break_low() {
        let m = OneVsAll::new(4, Hyperparams::new(2)).unwrap();
        assert_eq!(m.predict(&[1.0, 1.0]), 0);
    }

    #[test]
    fn two_classes_are_mirror_images() {
        let mut m = OneVsAll::new(2, Hyperparams::new(2)).unwrap();
        let data = [([1.0, 0.1], 0), ([1.0, 0.8], 1), ([1.0, 0.3], 0), ([1.0, 0.95], 1), ([1.0, 0.2], 0)];
        for (x, c) in &data {
            m.step(x, *c).unwrap();
        }
        let t = m.theta();
        for i in 0..2 {
            let (a, b) = (t[(i, 0)], t[(i, 1)]);
            assert!((a + b).abs() <= 1e-6 * a.abs().max(1.0), "{a} {b}");
        }
    }
}
