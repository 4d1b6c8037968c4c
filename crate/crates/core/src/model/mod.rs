//! Learners and their batch oracles.
//!
//! * [`NrRls`]: online total-error-rate learner with exact class reweighting.
//! * [`Rls`]: classic recursive least-squares.
//! * [`batch`]: closed-form LS / WLS / TER solves plus the TER objective.
//! * [`OneVsAll`]: multiclass wrapper over independent [`NrRls`] learners.

pub mod batch;
mod multiclass;
mod nrrls;
mod rls;

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm2};

pub use batch::{
    batch_ls_solve, batch_ter_solve, batch_ter_solve_with, batch_wls_solve, ter_gradient,
    ter_objective,
};
pub use multiclass::OneVsAll;
pub use nrrls::{ClassCounts, NrRls, SNAPSHOT_FORMAT_VERSION};
pub use rls::Rls;

/// Regularization used throughout the experiments.
pub const DEFAULT_RIDGE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    pub fn from_sign(v: i64) -> Option<Label> {
        match v {
            -1 => Some(Label::Negative),
            1 => Some(Label::Positive),
            _ => None,
        }
    }

    /// `-1.0` or `+1.0`.
    pub fn sign(self) -> f64 {
        match self {
            Label::Negative => -1.0,
            Label::Positive => 1.0,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Label::Negative => -1,
            Label::Positive => 1,
        }
    }

    pub fn flip(self) -> Label {
        match self {
            Label::Negative => Label::Positive,
            Label::Positive => Label::Negative,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.as_i8())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample {
    pub x: Vec<f64>,
    pub y: Label,
}

impl LabeledSample {
    pub fn new(x: Vec<f64>, y: Label) -> Self {
        LabeledSample { x, y }
    }
}

/// How class weights evolve as samples arrive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    /// Each class is weighted by the reciprocal of its current count.
    #[default]
    Rebalanced,
    /// Both class weights pinned to one; the learner reduces to ridge LS.
    FixedBalanced,
}

impl Weighting {
    pub fn name(self) -> &'static str {
        match self {
            Weighting::Rebalanced => "rebalanced",
            Weighting::FixedBalanced => "fixed",
        }
    }
}

impl std::str::FromStr for Weighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rebalanced" => Ok(Weighting::Rebalanced),
            "fixed" | "fixed_balanced" | "fixedbalanced" => Ok(Weighting::FixedBalanced),
            other => Err(Error::Validation(format!("unknown weighting `{other}`"))),
        }
    }
}

/// Regression targets for the two classes: `tau - eta` for negatives and
/// `tau + eta` for positives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetCoding {
    pub tau: f64,
    pub eta: f64,
}

impl Default for TargetCoding {
    fn default() -> Self {
        TargetCoding { tau: 0.0, eta: 1.0 }
    }
}

impl TargetCoding {
    pub fn target(&self, y: Label) -> f64 {
        self.tau + self.eta * y.sign()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperparams {
    /// Ridge regularization `b > 0`.
    pub b: f64,
    /// Expanded feature dimension.
    pub dim: usize,
    pub weighting: Weighting,
    pub targets: TargetCoding,
}

impl Hyperparams {
    pub fn new(dim: usize) -> Self {
        Hyperparams {
            b: DEFAULT_RIDGE,
            dim,
            weighting: Weighting::default(),
            targets: TargetCoding::default(),
        }
    }

    pub fn with_b(mut self, b: f64) -> Self {
        self.b = b;
        self
    }

    pub fn with_weighting(mut self, weighting: Weighting) -> Self {
        self.weighting = weighting;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.b > 0.0 && self.b.is_finite()) {
            return Err(Error::Validation(format!("ridge b must be positive, got {}", self.b)));
        }
        if self.dim == 0 {
            return Err(Error::Validation("dimension must be at least 1".into()));
        }
        let t = self.targets;
        if !(t.tau.is_finite() && t.eta.is_finite()) {
            return Err(Error::Validation("target coding must be finite".into()));
        }
        Ok(())
    }
}

/// A linear model vector `w`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficients(Vec<f64>);

impl Coefficients {
    pub fn new(w: Vec<f64>) -> Self {
        Coefficients(w)
    }

    pub fn zeros(dim: usize) -> Self {
        Coefficients(vec![0.0; dim])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn l2_norm(&self) -> f64 {
        norm2(&self.0)
    }

    pub fn negated(&self) -> Coefficients {
        Coefficients(self.0.iter().map(|v| -v).collect())
    }

    pub(crate) fn as_mut_vec(&mut self) -> &mut Vec<f64> {
        &mut self.0
    }
}

impl Deref for Coefficients {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Coefficients {
    fn from(w: Vec<f64>) -> Self {
        Coefficients(w)
    }
}

/// Decision score `wᵀx`. Panics if the lengths differ.
pub fn predict(w: &Coefficients, x: &[f64]) -> f64 {
    assert_eq!(w.len(), x.len(), "coefficient/feature length mismatch");
    dot(w, x)
}

/// Thresholds a score; a score exactly at `tau` is positive.
pub fn classify(score: f64, tau: f64) -> Label {
    if score >= tau {
        Label::Positive
    } else {
        Label::Negative
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predict_and_classify() {
        let w = Coefficients::new(vec![-1.0, 1.0]);
        let s = predict(&w, &[0.0, 1.0]);
        assert_eq!(s, 1.0);
        assert_eq!(classify(s, 0.0), Label::Positive);
    }

    #[test]
    fn tie_goes_positive() {
        assert_eq!(classify(0.0, 0.0), Label::Positive);
        assert_eq!(classify(-0.0, 0.0), Label::Positive);
        assert_eq!(classify(0.5, 0.5), Label::Positive);
        assert_eq!(classify(-1e-300, 0.0), Label::Negative);
    }

    #[test]
    fn negated_weights_flip_labels() {
        let w = Coefficients::new(vec![0.3, -2.0, 0.7]);
        let xs = [[1.0, 0.2, 0.1], [1.0, 0.9, -3.0], [0.0, 1.0, 1.0]];
        for x in xs {
            let s = predict(&w, &x);
            assert_ne!(s, 0.0);
            assert_eq!(classify(predict(&w.negated(), &x), 0.0), classify(s, 0.0).flip());
        }
    }

    #[test]
    fn hyperparam_validation() {
        assert!(Hyperparams::new(3).validate().is_ok());
        assert!(Hyperparams::new(0).validate().is_err());
        assert!(Hyperparams::new(2).with_b(0.0).validate().is_err());
        assert!(Hyperparams::new(2).with_b(f64::NAN).validate().is_err());
    }

    #[test]
    fn default_targets_are_plus_minus_one() {
        let t = TargetCoding::default();
        assert_eq!(t.target(Label::Negative), -1.0);
        assert_eq!(t.target(Label::Positive), 1.0);
    }
}
