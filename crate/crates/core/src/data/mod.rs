//! Datasets: text loaders, stratified splits and synthetic generators.

mod delimited;
mod libsvm;
mod split;
mod synth;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::model::{Label, LabeledSample};

pub use delimited::{load_delimited, parse_delimited, DelimitedOptions};
pub use libsvm::{load_libsvm, parse_libsvm, write_libsvm};
pub use split::{make_splits, SplitPlan, FOLDS};
pub use synth::{
    gen_gaussian_imbalanced, gen_overlap_demo, gen_stream, BayesRule, GaussianData, OverlapDemo,
};

/// Binary dataset with raw (unexpanded) features.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    x: Mat,
    y: Vec<Label>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DatasetSummary {
    pub n: usize,
    pub raw_dim: usize,
    pub n_neg: usize,
    pub n_pos: usize,
    pub imbalance_ratio: f64,
}

impl Dataset {
    pub fn new(name: impl Into<String>, x: Mat, y: Vec<Label>) -> Result<Self> {
        if x.rows() != y.len() {
            return Err(Error::LengthMismatch { left: x.rows(), right: y.len() });
        }
        if let Some(pos) = x.as_slice().iter().position(|v| !v.is_finite()) {
            let cols = x.cols().max(1);
            return Err(Error::NonFinite { row: pos / cols + 1, col: pos % cols + 1 });
        }
        Ok(Dataset { name: name.into(), x, y })
    }

    pub fn from_samples(name: impl Into<String>, samples: &[LabeledSample], dim: usize) -> Result<Self> {
        let mut x = Mat::with_cols(dim);
        for s in samples {
            x.push_row(&s.x)?;
        }
        Dataset::new(name, x, samples.iter().map(|s| s.y).collect())
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn raw_dim(&self) -> usize {
        self.x.cols()
    }

    pub fn x(&self) -> &Mat {
        &self.x
    }

    pub fn labels(&self) -> &[Label] {
        &self.y
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.x.row(i)
    }

    pub fn count(&self, label: Label) -> usize {
        self.y.iter().filter(|&&l| l == label).count()
    }

    /// `n⁺ / n⁻` (infinite when there are no negatives).
    pub fn imbalance_ratio(&self) -> f64 {
        self.count(Label::Positive) as f64 / self.count(Label::Negative) as f64
    }

    pub fn summary(&self) -> DatasetSummary {
        DatasetSummary {
            n: self.len(),
            raw_dim: self.raw_dim(),
            n_neg: self.count(Label::Negative),
            n_pos: self.count(Label::Positive),
            imbalance_ratio: self.imbalance_ratio(),
        }
    }

    pub fn samples(&self) -> Vec<LabeledSample> {
        self.x
            .row_iter()
            .zip(&self.y)
            .map(|(r, &y)| LabeledSample::new(r.to_vec(), y))
            .collect()
    }

    /// Rows in the given order.
    pub fn subset(&self, idx: &[usize]) -> Dataset {
        let mut x = Mat::with_cols(self.raw_dim());
        let mut y = Vec::with_capacity(idx.len());
        for &i in idx {
            x.push_row(self.x.row(i)).expect("same width");
            y.push(self.y[i]);
        }
        Dataset { name: self.name.clone(), x, y }
    }

    /// Same features with every label flipped.
    pub fn flipped(&self) -> Dataset {
        Dataset {
            name: self.name.clone(),
            x: self.x.clone(),
            y: self.y.iter().map(|l| l.flip()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite() {
        let x = Mat::from_rows(&[[1.0, 2.0], [f64::NAN, 0.0]]);
        let err = Dataset::new("t", x, vec![Label::Positive, Label::Negative]).unwrap_err();
        assert!(matches!(err, Error::NonFinite { row: 2, col: 1 }));
    }

    #[test]
    fn ratio_from_counts() {
        let x = Mat::from_rows(&[[1.0], [2.0], [3.0]]);
        let d = Dataset::new("t", x, vec![Label::Positive, Label::Negative, Label::Negative]).unwrap();
        assert_eq!(d.imbalance_ratio(), 0.5);
        assert_eq!(d.summary().n_neg, 2);
        assert_eq!(d.flipped().count(Label::Positive), 2);
    }
}
