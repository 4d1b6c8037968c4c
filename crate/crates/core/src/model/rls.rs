use super::{Coefficients, Hyperparams, Label, LabeledSample};
use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, matvec_into, symmetrize_in_place, Mat};

/// Classic recursive least-squares.
///
/// `R⁻¹` starts at `I/b` and absorbs one rank-one term per sample; the
/// coefficient vector follows the a-priori error correction. Class weights
/// are ignored, so this solves the unweighted ridge LS problem.
#[derive(Debug, Clone)]
pub struct Rls {
    hp: Hyperparams,
    r_inv: Mat,
    w: Coefficients,
    seen: u64,
    u: Vec<f64>,
    v: Vec<f64>,
}

impl Rls {
    pub fn new(hp: Hyperparams) -> Result<Self> {
        hp.validate()?;
        let d = hp.dim;
        let mut r_inv = Mat::identity(d);
        r_inv.scale_in_place(1.0 / hp.b);
        Ok(Rls {
            hp,
            r_inv,
            w: Coefficients::zeros(d),
            seen: 0,
            u: vec![0.0; d],
            v: vec![0.0; d],
        })
    }

    pub fn hyperparams(&self) -> &Hyperparams {
        &self.hp
    }

    pub fn r_inv(&self) -> &Mat {
        &self.r_inv
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.w
    }

    pub fn seen(&self) -> u64 {
        self.seen
    }

    pub fn classify(&self, x: &[f64]) -> Label {
        super::classify(super::predict(&self.w, x), self.hp.targets.tau)
    }

    pub fn step(&mut self, sample: &LabeledSample) -> Result<&Coefficients> {
        let target = self.hp.targets.target(sample.y);
        self.update(&sample.x, target)
    }

    /// Absorbs `(x, target)` with a real-valued target.
    pub fn update(&mut self, x: &[f64], target: f64) -> Result<&Coefficients> {
        let d = self.hp.dim;
        if x.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: x.len() });
        }
        // R⁻¹ ← R⁻¹ - R⁻¹x xᵀR⁻¹ / (1 + xᵀR⁻¹x)
        matvec_into(&self.r_inv, x, &mut self.u)?;
        self.v.fill(0.0);
        for (row, &xi) in self.r_inv.row_iter().zip(x) {
            axpy(xi, row, &mut self.v);
        }
        let denom = 1.0 + dot(x, &self.u);
        self.r_inv.add_outer(-1.0 / denom, &self.u, &self.v);
        symmetrize_in_place(&mut self.r_inv);

        // w ← w + R⁻¹x (y - xᵀw)
        let err = target - dot(x, &self.w);
        matvec_into(&self.r_inv, x, &mut self.u)?;
        axpy(err, &self.u, self.w.as_mut_vec());
        self.seen += 1;
        Ok(&self.w)
    }
}
