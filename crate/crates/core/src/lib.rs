//! Online class-imbalance classification with non-iteratively reweighted
//! recursive least-squares (NR-RLS).
//!
//! The learner in [`model::NrRls`] keeps class-conditional moment statistics
//! and an inverse second-moment matrix, and after every sample returns the
//! exact minimizer of the class-rebalanced (total-error-rate) least-squares
//! objective over everything seen so far, at a per-step cost that does not
//! grow with the stream length.
//!
//! ```
//! use nrrls::model::{Hyperparams, Label, LabeledSample, NrRls};
//!
//! let mut learner = NrRls::new(Hyperparams::new(2)).unwrap();
//! learner.step(&LabeledSample::new(vec![1.0, 0.2], Label::Negative)).unwrap();
//! let w = learner.step(&LabeledSample::new(vec![1.0, 0.9], Label::Positive)).unwrap();
//! assert_eq!(w.len(), 2);
//! ```
//!
//! Runnable walkthroughs live in `examples/`; the `nrrls` binary wraps the
//! benchmark experiments in [`experiment`].

pub mod data;
pub mod error;
pub mod eval;
pub mod experiment;
pub mod features;
pub mod linalg;
pub mod model;

pub use error::{Error, Result};
