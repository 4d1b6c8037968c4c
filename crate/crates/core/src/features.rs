//! Min–max scaling and polynomial feature expansion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat;

/// Largest expanded width for which [`ExpansionMode::Auto`] keeps the full multinomial.
pub const FULL_MULTINOMIAL_LIMIT: usize = 2000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaler {
    min: Vec<f64>,
    max: Vec<f64>,
}

impl MinMaxScaler {
    pub fn fit(x: &Mat) -> Result<Self> {
        if x.rows() == 0 {
            return Err(Error::EmptyFile);
        }
        let mut min = x.row(0).to_vec();
        let mut max = min.clone();
        for row in x.row_iter().skip(1) {
            for (j, &v) in row.iter().enumerate() {
                min[j] = min[j].min(v);
                max[j] = max[j].max(v);
            }
        }
        Ok(MinMaxScaler { min, max })
    }

    pub fn fit_rows<'a>(rows: impl IntoIterator<Item = &'a [f64]>) -> Result<Self> {
        let mut it = rows.into_iter();
        let first = it.next().ok_or(Error::EmptyFile)?;
        let mut min = first.to_vec();
        let mut max = min.clone();
        for row in it {
            if row.len() != min.len() {
                return Err(Error::DimensionMismatch { expected: min.len(), found: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                min[j] = min[j].min(v);
                max[j] = max[j].max(v);
            }
        }
        Ok(MinMaxScaler { min, max })
    }

    pub fn dim(&self) -> usize {
        self.min.len()
    }

    pub fn min(&self) -> &[f64] {
        &self.min
    }

    pub fn max(&self) -> &[f64] {
        &self.max
    }

    /// `(x - min) / (max - min)`, unclipped; constant features map to 0.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        Ok(x.iter()
            .zip(self.min.iter().zip(&self.max))
            .map(|(&v, (&lo, &hi))| if hi > lo { (v - lo) / (hi - lo) } else { 0.0 })
            .collect())
    }

    pub fn apply_mat(&self, x: &Mat) -> Result<Mat> {
        let mut out = Mat::with_cols(x.cols());
        for row in x.row_iter() {
            out.push_row(&self.apply(row)?)?;
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionMode {
    /// All monomials of total degree ≤ r.
    FullMultinomial,
    /// `1, x, x², …, xʳ` per feature, no cross terms.
    PerFeaturePowers,
    /// Full multinomial when its width is at most [`FULL_MULTINOMIAL_LIMIT`].
    Auto,
}

impl std::str::FromStr for ExpansionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" | "full_multinomial" => Ok(ExpansionMode::FullMultinomial),
            "powers" | "per_feature_powers" => Ok(ExpansionMode::PerFeaturePowers),
            "auto" => Ok(ExpansionMode::Auto),
            other => Err(Error::Validation(format!("unknown expansion mode `{other}`"))),
        }
    }
}

/// `C(n, k)`, saturating at `usize::MAX`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyExpander {
    order: usize,
    raw_dim: usize,
    mode: ExpansionMode,
    // For each monomial past the constant: (index of its prefix monomial, variable).
    plan: Vec<(usize, usize)>,
}

impl PolyExpander {
    /// `mode` may be [`ExpansionMode::Auto`]; the resolved mode is reported by [`PolyExpander::mode`].
    pub fn new(order: usize, raw_dim: usize, mode: ExpansionMode) -> Result<Self> {
        if !(1..=6).contains(&order) {
            return Err(Error::Validation(format!("polynomial order must be in 1..=6, got {order}")));
        }
        if raw_dim == 0 {
            return Err(Error::Validation("raw dimension must be at least 1".into()));
        }
        let mode = match mode {
            ExpansionMode::Auto => {
                if binomial(raw_dim + order, order) <= FULL_MULTINOMIAL_LIMIT {
                    ExpansionMode::FullMultinomial
                } else {
                    ExpansionMode::PerFeaturePowers
                }
            }
            m => m,
        };
        let plan = match mode {
            ExpansionMode::FullMultinomial => multinomial_plan(order, raw_dim),
            _ => Vec::new(),
        };
        Ok(PolyExpander { order, raw_dim, mode, plan })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn raw_dim(&self) -> usize {
        self.raw_dim
    }

    pub fn mode(&self) -> ExpansionMode {
        self.mode
    }

    pub fn output_dim(&self) -> usize {
        match self.mode {
            ExpansionMode::FullMultinomial => 1 + self.plan.len(),
            _ => 1 + self.raw_dim * self.order,
        }
    }

    pub fn expand(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.raw_dim {
            return Err(Error::DimensionMismatch { expected: self.raw_dim, found: x.len() });
        }
        let mut out = Vec::with_capacity(self.output_dim());
        out.push(1.0);
        match self.mode {
            ExpansionMode::FullMultinomial => {
                for &(prefix, var) in &self.plan {
                    let v = out[prefix] * x[var];
                    out.push(v);
                }
            }
            _ => {
                out.extend_from_slice(x);
                for p in 1..self.order {
                    let base = 1 + (p - 1) * self.raw_dim;
                    for j in 0..self.raw_dim {
                        let v = out[base + j] * x[j];
                        out.push(v);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Graded-lexicographic monomial enumeration. Degree-k monomials are the
/// non-decreasing index tuples `i₁ ≤ … ≤ i_k` in lexicographic order; each is
/// its (k-1)-prefix times `x[i_k]`.
fn multinomial_plan(order: usize, raw_dim: usize) -> Vec<(usize, usize)> {
    let mut plan = Vec::new();
    // (position in output, last variable) of every degree-(k-1) monomial
    let mut prev: Vec<(usize, usize)> = vec![(0, 0)];
    let mut next_pos = 1;
    for degree in 1..=order {
        let mut cur = Vec::new();
        for &(pos, last) in &prev {
            let start = if degree == 1 { 0 } else { last };
            for var in start..raw_dim {
                plan.push((pos, var));
                cur.push((next_pos, var));
                next_pos += 1;
            }
        }
        prev = cur;
    }
    plan
}
