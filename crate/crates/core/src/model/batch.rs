//! Closed-form batch solutions, used both as learners and as oracles for
//! the online recursions.

use super::{Coefficients, Label, LabeledSample, TargetCoding};
use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, solve_vec, Mat};

/// Accumulates `weight * XᵀX` into `out`, filling the upper triangle and mirroring.
fn add_weighted_gram(x: &Mat, weight: f64, out: &mut Mat) {
    let d = x.cols();
    for row in x.row_iter() {
        for i in 0..d {
            let k = weight * row[i];
            if k == 0.0 {
                continue;
            }
            let orow = &mut out.row_mut(i)[i..];
            axpy(k, &row[i..], orow);
        }
    }
    for i in 0..d {
        for j in 0..i {
            out[(i, j)] = out[(j, i)];
        }
    }
}

fn check_ridge(b: f64) -> Result<()> {
    if b < 0.0 || !b.is_finite() {
        return Err(Error::Validation(format!("ridge b must be nonnegative, got {b}")));
    }
    Ok(())
}

/// Ridge least squares `w = (XᵀX + bI)⁻¹ Xᵀy`.
pub fn batch_ls_solve(x: &Mat, y: &[f64], b: f64) -> Result<Coefficients> {
    check_ridge(b)?;
    if x.rows() != y.len() {
        return Err(Error::LengthMismatch { left: x.rows(), right: y.len() });
    }
    if x.rows() == 0 {
        return Err(Error::EmptyFile);
    }
    let mut a = Mat::zeros(x.cols(), x.cols());
    add_weighted_gram(x, 1.0, &mut a);
    a.add_identity(b);
    let rhs = x.matvec_t(y)?;
    Ok(Coefficients::new(solve_vec(&a, &rhs)?))
}

/// Weighted least squares `w = (XᵀWX + bI)⁻¹ XᵀWy` with `W = diag(weights)`.
pub fn batch_wls_solve(x: &Mat, y: &[f64], weights: &[f64], b: f64) -> Result<Coefficients> {
    check_ridge(b)?;
    if x.rows() != y.len() {
        return Err(Error::LengthMismatch { left: x.rows(), right: y.len() });
    }
    if x.rows() != weights.len() {
        return Err(Error::LengthMismatch { left: x.rows(), right: weights.len() });
    }
    let d = x.cols();
    let mut a = Mat::zeros(d, d);
    let mut rhs = vec![0.0; d];
    for ((row, &yi), &wi) in x.row_iter().zip(y).zip(weights) {
        a.add_outer(wi, row, row);
        axpy(wi * yi, row, &mut rhs);
    }
    a.add_identity(b);
    Ok(Coefficients::new(solve_vec(&a, &rhs)?))
}

/// Batch total-error-rate solution with the default ±1 targets.
pub fn batch_ter_solve(x_neg: &Mat, x_pos: &Mat, b: f64) -> Result<Coefficients> {
    batch_ter_solve_with(x_neg, x_pos, b, TargetCoding::default())
}

/// `w = (X⁻ᵀX⁻/n⁻ + X⁺ᵀX⁺/n⁺ + bI)⁻¹ (X⁻ᵀy⁻/n⁻ + X⁺ᵀy⁺/n⁺)`.
/// An empty class contributes nothing.
pub fn batch_ter_solve_with(
    x_neg: &Mat,
    x_pos: &Mat,
    b: f64,
    targets: TargetCoding,
) -> Result<Coefficients> {
    check_ridge(b)?;
    if x_neg.cols() != x_pos.cols() {
        return Err(Error::DimensionMismatch { expected: x_neg.cols(), found: x_pos.cols() });
    }
    if x_neg.rows() + x_pos.rows() == 0 {
        return Err(Error::EmptyFile);
    }
    let d = x_neg.cols();
    let mut a = Mat::zeros(d, d);
    let mut rhs = vec![0.0; d];
    for (x, label) in [(x_neg, Label::Negative), (x_pos, Label::Positive)] {
        let n = x.rows();
        if n == 0 {
            continue;
        }
        let weight = 1.0 / n as f64;
        add_weighted_gram(x, weight, &mut a);
        let t = weight * targets.target(label);
        for row in x.row_iter() {
            axpy(t, row, &mut rhs);
        }
    }
    a.add_identity(b);
    Ok(Coefficients::new(solve_vec(&a, &rhs)?))
}

fn check_dims(w: &[f64], x_neg: &Mat, x_pos: &Mat) -> Result<()> {
    for x in [x_neg, x_pos] {
        if x.cols() != w.len() && x.rows() > 0 {
            return Err(Error::DimensionMismatch { expected: w.len(), found: x.cols() });
        }
    }
    Ok(())
}

/// `J(w) = Σ⁻(y - wᵀx)²/2n⁻ + Σ⁺(y - wᵀx)²/2n⁺ + b‖w‖²/2`
pub fn ter_objective(w: &[f64], x_neg: &Mat, x_pos: &Mat, b: f64) -> Result<f64> {
    check_dims(w, x_neg, x_pos)?;
    let targets = TargetCoding::default();
    let mut j = 0.5 * b * dot(w, w);
    for (x, label) in [(x_neg, Label::Negative), (x_pos, Label::Positive)] {
        if x.rows() == 0 {
            continue;
        }
        let t = targets.target(label);
        let sse: f64 = x.row_iter().map(|r| (t - dot(w, r)).powi(2)).sum();
        j += sse / (2.0 * x.rows() as f64);
    }
    Ok(j)
}

/// Analytic gradient of [`ter_objective`].
pub fn ter_gradient(w: &[f64], x_neg: &Mat, x_pos: &Mat, b: f64) -> Result<Vec<f64>> {
    check_dims(w, x_neg, x_pos)?;
    let targets = TargetCoding::default();
    let mut g: Vec<f64> = w.iter().map(|v| b * v).collect();
    for (x, label) in [(x_neg, Label::Negative), (x_pos, Label::Positive)] {
        if x.rows() == 0 {
            continue;
        }
        let t = targets.target(label);
        let n = x.rows() as f64;
        for r in x.row_iter() {
            axpy(-(t - dot(w, r)) / n, r, &mut g);
        }
    }
    Ok(g)
}

/// Splits samples into per-class design matrices.
pub fn split_by_class(samples: &[LabeledSample], dim: usize) -> Result<(Mat, Mat)> {
    let mut neg = Mat::with_cols(dim);
    let mut pos = Mat::with_cols(dim);
    for s in samples {
        match s.y {
            Label::Negative => neg.push_row(&s.x)?,
            Label::Positive => pos.push_row(&s.x)?,
        }
    }
    Ok((neg, pos))
}

/// Design matrix and ±1 target vector.
pub fn design(samples: &[LabeledSample], dim: usize) -> Result<(Mat, Vec<f64>)> {
    let mut x = Mat::with_cols(dim);
    let mut y = Vec::with_capacity(samples.len());
    for s in samples {
        x.push_row(&s.x)?;
        y.push(s.y.sign());
    }
    Ok((x, y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ls_orthonormal() {
        let w = batch_ls_solve(&Mat::identity(2), &[1.0, -1.0], 0.0).unwrap();
        assert_eq!(w.as_slice(), &[1.0, -1.0]);
    }

    #[test]
    fn ls_exact_fit() {
        let x = Mat::from_rows(&[[1.0], [2.0]]);
        let w = batch_ls_solve(&x, &[1.0, 2.0], 0.0).unwrap();
        assert_eq!(w.as_slice(), &[1.0]);
    }

    #[test]
    fn ls_singular_only_without_ridge() {
        let x = Mat::from_rows(&[[1.0, 1.0], [2.0, 2.0]]);
        assert!(matches!(batch_ls_solve(&x, &[1.0, 1.0], 0.0), Err(Error::Singular { .. })));
        assert!(batch_ls_solve(&x, &[1.0, 1.0], 1e-4).is_ok());
    }

    #[test]
    fn ls_normal_equation_residual() {
        let x = Mat::from_row_major(
            10,
            3,
            (0..30).map(|i| ((i * 37 % 11) as f64 - 5.0) / 3.0).collect(),
        );
        let y: Vec<f64> = (0..10).map(|i| if i % 3 == 0 { 1.0 } else { -1.0 }).collect();
        let w = batch_ls_solve(&x, &y, 1e-4).unwrap();
        let mut a = x.transpose().matmul(&x).unwrap();
        a.add_identity(1e-4);
        let lhs = a.matvec(&w).unwrap();
        let rhs = x.matvec_t(&y).unwrap();
        for (l, r) in lhs.iter().zip(&rhs) {
            assert!((l - r).abs() <= 1e-9);
        }
    }

    #[test]
    fn ter_orthonormal_balanced() {
        let neg = Mat::from_rows(&[[1.0, 0.0]]);
        let pos = Mat::from_rows(&[[0.0, 1.0]]);
        let w = batch_ter_solve(&neg, &pos, 0.0).unwrap();
        assert_eq!(w.as_slice(), &[-1.0, 1.0]);
    }

    #[test]
    fn ter_reweights_duplicates() {
        let neg = Mat::from_rows(&[[1.0, 0.0], [1.0, 0.0]]);
        let pos = Mat::from_rows(&[[0.0, 1.0]]);
        let w = batch_ter_solve(&neg, &pos, 0.0).unwrap();
        assert_eq!(w.as_slice(), &[-1.0, 1.0]);
    }

    #[test]
    fn ter_equals_generic_wls() {
        let neg = Mat::from_rows(&[[1.0, 0.3, -0.2], [0.5, 0.9, 0.1], [0.2, -0.4, 1.0]]);
        let pos = Mat::from_rows(&[[0.1, 1.0, 0.7], [0.8, 0.2, 0.3]]);
        let ter = batch_ter_solve(&neg, &pos, 1e-3).unwrap();
        let mut x = neg.clone();
        let mut y = vec![-1.0; 3];
        let mut wts = vec![1.0 / 3.0; 3];
        for r in pos.row_iter() {
            x.push_row(r).unwrap();
            y.push(1.0);
            wts.push(0.5);
        }
        let wls = batch_wls_solve(&x, &y, &wts, 1e-3).unwrap();
        for (a, b) in ter.iter().zip(wls.iter()) {
            assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn ter_empty_class_contributes_nothing() {
        let pos = Mat::from_rows(&[[1.0, 0.0], [0.0, 2.0]]);
        let w = batch_ter_solve(&Mat::with_cols(2), &pos, 0.5).unwrap();
        // (XᵀX/2 + 0.5 I) w = Xᵀ1/2
        assert!((w[0] - 0.5).abs() < 1e-15);
        assert!((w[1] - 1.0 / 2.5).abs() < 1e-15);
        assert!(batch_ter_solve(&Mat::with_cols(2), &Mat::with_cols(2), 1.0).is_err());
    }

    #[test]
    fn objective_single_negative_at_zero() {
        let neg = Mat::from_rows(&[[0.3, -2.0]]);
        for b in [0.0, 1e-4, 7.0] {
            let j = ter_objective(&[0.0, 0.0], &neg, &Mat::with_cols(2), b).unwrap();
            assert_eq!(j, 0.5);
        }
    }

    #[test]
    fn gradient_vanishes_at_solution() {
        let neg = Mat::from_rows(&[[1.0, 0.3], [0.5, 0.9], [0.2, -0.4]]);
        let pos = Mat::from_rows(&[[0.1, 1.0], [0.8, 0.2]]);
        let w = batch_ter_solve(&neg, &pos, 1e-4).unwrap();
        let g = ter_gradient(&w, &neg, &pos, 1e-4).unwrap();
        assert!(g.iter().all(|v| v.abs() <= 1e-8));
    }

    #[test]
    fn objective_dimension_checked() {
        let neg = Mat::from_rows(&[[1.0, 0.3]]);
        assert!(ter_objective(&[1.0], &neg, &Mat::with_cols(2), 0.0).is_err());
        assert!(ter_gradient(&[1.0, 2.0, 3.0], &neg, &Mat::with_cols(2), 0.0).is_err());
    }
}
