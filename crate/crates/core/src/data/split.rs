use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};
use crate::model::Label;

pub const FOLDS: usize = 2;

/// Seeded, stratified repeated 2-fold assignments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub runs: usize,
    pub seed: u64,
    /// `assignments[run][sample]` is the fold id of `sample` in `run`.
    pub assignments: Vec<Vec<u8>>,
    /// Per-run visiting order; fold members are reported in this order.
    pub order: Vec<Vec<usize>>,
}

impl SplitPlan {
    pub fn folds(&self) -> usize {
        FOLDS
    }

    pub fn n(&self) -> usize {
        self.assignments.first().map_or(0, Vec::len)
    }

    /// Indices of `fold` in `run`, in the run's shuffled order.
    pub fn fold_indices(&self, run: usize, fold: usize) -> Vec<usize> {
        self.order[run]
            .iter()
            .copied()
            .filter(|&i| self.assignments[run][i] as usize == fold)
            .collect()
    }

    /// `(train, test)` for evaluating on `test_fold`; training uses the other fold.
    pub fn train_test(&self, run: usize, test_fold: usize) -> (Vec<usize>, Vec<usize>) {
        let train_fold = (test_fold + 1) % FOLDS;
        (self.fold_indices(run, train_fold), self.fold_indices(run, test_fold))
    }

    /// One `run fold index` line per sample and run, for auditing.
    pub fn export(&self) -> String {
        let mut out = String::from("run fold index\n");
        for (run, a) in self.assignments.iter().enumerate() {
            for (i, &f) in a.iter().enumerate() {
                let _ = writeln!(out, "{run} {f} {i}");
            }
        }
        out
    }
}

/// Builds `runs` stratified 2-fold partitions; per-class fold sizes differ by at most one.
pub fn make_splits(ds: &Dataset, runs: usize, seed: u64) -> Result<SplitPlan> {
    if runs == 0 {
        return Err(Error::Validation("runs must be at least 1".into()));
    }
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(), Vec::new()];
    for (i, &y) in ds.labels().iter().enumerate() {
        by_class[(y == Label::Positive) as usize].push(i);
    }
    for (members, label) in by_class.iter().zip([Label::Negative, Label::Positive]) {
        if members.len() < FOLDS {
            return Err(Error::InsufficientClassSamples {
                class: label.as_i8(),
                count: members.len(),
                needed: FOLDS,
            });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = ds.len();
    let mut assignments = Vec::with_capacity(runs);
    let mut order = Vec::with_capacity(runs);
    for _ in 0..runs {
        let mut fold_of = vec![0u8; n];
        for members in &by_class {
            let mut shuffled = members.clone();
            shuffled.shuffle(&mut rng);
            let offset: usize = rng.random_range(0..FOLDS);
            for (k, &i) in shuffled.iter().enumerate() {
                fold_of[i] = ((k + offset) % FOLDS) as u8;
            }
        }
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        assignments.push(fold_of);
        order.push(perm);
    }
    Ok(SplitPlan { runs, seed, assignments, order })
}
