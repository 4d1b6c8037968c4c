//! Small dense linear algebra.
//!
//! Row-major `f64` matrices sized for the learner state (d up to a few
//! thousand). Vectors are plain slices. Linear systems go through a
//! partial-pivoted LU factorization; [`invert`] exists only for the places
//! where the algorithm state itself is an inverse.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Pivots smaller than this fraction of the matrix's largest entry are singular.
pub const SINGULAR_RTOL: f64 = 1e-12;

#[derive(Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Mat::zeros(diag.len(), diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Builds a matrix from row-major data. Panics if `data.len() != rows * cols`.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major buffer has wrong length");
        Mat { rows, cols, data }
    }

    /// Builds a matrix from nested rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Mat { rows: rows.len(), cols, data }
    }

    /// An empty matrix with `cols` columns, ready for [`Mat::push_row`].
    pub fn with_cols(cols: usize) -> Self {
        Mat { rows: 0, cols, data: Vec::new() }
    }

    pub fn column(v: &[f64]) -> Self {
        Mat::from_row_major(v.len(), 1, v.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[f64]> {
        // chunks_exact(0) panics, so guard the zero-column case
        let cols = self.cols.max(1);
        self.data.chunks_exact(cols).take(self.rows)
    }

    pub fn col_vec(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn push_row(&mut self, row: &[f64]) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: row.len() });
        }
        self.data.extend_from_slice(row);
        self.rows += 1;
        Ok(())
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        self.row_iter()
            .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn scale_in_place(&mut self, s: f64) {
        self.data.iter_mut().for_each(|v| *v *= s);
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, s: f64, other: &Mat) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    /// `self += s * u vᵀ`
    pub fn add_outer(&mut self, s: f64, u: &[f64], v: &[f64]) {
        assert_eq!(u.len(), self.rows);
        assert_eq!(v.len(), self.cols);
        for (r, &ur) in u.iter().enumerate() {
            let k = s * ur;
            if k == 0.0 {
                continue;
            }
            for (a, &vc) in self.row_mut(r).iter_mut().zip(v) {
                *a += k * vc;
            }
        }
    }

    pub fn add_identity(&mut self, s: f64) {
        assert!(self.is_square());
        for i in 0..self.rows {
            self[(i, i)] += s;
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        let mut out = self.clone();
        out.add_scaled(-1.0, other);
        out
    }

    pub fn matmul(&self, other: &Mat) -> Result<Mat> {
        let mut out = Mat::zeros(self.rows, other.cols);
        matmul_into(self, other, &mut out)?;
        Ok(out)
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.rows];
        matvec_into(self, v, &mut out)?;
        Ok(out)
    }

    /// `selfᵀ v`
    pub fn matvec_t(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.rows {
            return Err(Error::LengthMismatch { left: self.rows, right: v.len() });
        }
        let mut out = vec![0.0; self.cols];
        for (row, &vr) in self.row_iter().zip(v) {
            axpy(vr, row, &mut out);
        }
        Ok(out)
    }

    pub fn copy_from(&mut self, other: &Mat) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.copy_from_slice(&other.data);
    }

    pub fn fill(&mut self, v: f64) {
        self.data.iter_mut().for_each(|x| *x = v);
    }

    /// Maximum entrywise asymmetry `max |A - Aᵀ|`.
    pub fn asymmetry(&self) -> f64 {
        assert!(self.is_square());
        let mut m: f64 = 0.0;
        for r in 0..self.rows {
            for c in r + 1..self.cols {
                m = m.max((self[(r, c)] - self[(c, r)]).abs());
            }
        }
        m
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = f64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += a * x`
#[inline]
pub fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// `‖a - b‖₂ / (‖b‖₂ + 1e-12)`
pub fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    diff / (norm2(b) + 1e-12)
}

pub fn matmul_into(a: &Mat, b: &Mat, out: &mut Mat) -> Result<()> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch { expected: a.cols, found: b.rows });
    }
    assert_eq!((out.rows, out.cols), (a.rows, b.cols));
    out.fill(0.0);
    for r in 0..a.rows {
        let arow = &a.data[r * a.cols..(r + 1) * a.cols];
        let orow = &mut out.data[r * b.cols..(r + 1) * b.cols];
        for (k, &ark) in arow.iter().enumerate() {
            if ark != 0.0 {
                axpy(ark, b.row(k), orow);
            }
        }
    }
    Ok(())
}

pub fn matvec_into(a: &Mat, v: &[f64], out: &mut [f64]) -> Result<()> {
    if v.len() != a.cols {
        return Err(Error::LengthMismatch { left: a.cols, right: v.len() });
    }
    for (o, row) in out.iter_mut().zip(a.row_iter()) {
        *o = dot(row, v);
    }
    Ok(())
}

/// Outer product `u vᵀ`.
pub fn outer(u: &[f64], v: &[f64]) -> Result<Mat> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch { left: u.len(), right: v.len() });
    }
    let mut m = Mat::zeros(u.len(), v.len());
    m.add_outer(1.0, u, v);
    Ok(m)
}

/// `(A + Aᵀ) / 2`. Panics if `a` is not square.
pub fn symmetrize(a: &Mat) -> Mat {
    let mut out = a.clone();
    symmetrize_in_place(&mut out);
    out
}

pub fn symmetrize_in_place(a: &mut Mat) {
    assert!(a.is_square(), "symmetrize needs a square matrix");
    let n = a.rows;
    for r in 0..n {
        for c in r + 1..n {
            let m = 0.5 * (a[(r, c)] + a[(c, r)]);
            a[(r, c)] = m;
            a[(c, r)] = m;
        }
    }
}

/// Partial-pivoted LU factorization `P A = L U`, stored packed.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: Mat,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(a: &Mat) -> Result<Lu> {
        let mut lu = Lu { n: 0, lu: Mat::zeros(0, 0), perm: Vec::new() };
        lu.refactor(a)?;
        Ok(lu)
    }

    /// Factors `a`, reusing this value's buffers when the size matches.
    pub fn refactor(&mut self, a: &Mat) -> Result<()> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch { expected: a.rows, found: a.cols });
        }
        let n = a.rows;
        if self.n != n {
            self.n = n;
            self.lu = Mat::zeros(n, n);
            self.perm = vec![0; n];
        }
        self.lu.copy_from(a);
        for (i, p) in self.perm.iter_mut().enumerate() {
            *p = i;
        }
        let threshold = SINGULAR_RTOL * a.max_abs();
        let lu = &mut self.lu;
        for k in 0..n {
            let mut piv = k;
            let mut best = lu[(k, k)].abs();
            for r in k + 1..n {
                let v = lu[(r, k)].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best.is_nan() || best <= threshold {
                return Err(Error::Singular { pivot: best, threshold });
            }
            if piv != k {
                for c in 0..n {
                    lu.data.swap(k * n + c, piv * n + c);
                }
                self.perm.swap(k, piv);
            }
            let pivot = lu[(k, k)];
            for r in k + 1..n {
                let f = lu[(r, k)] / pivot;
                lu[(r, k)] = f;
                if f != 0.0 {
                    let (top, bottom) = lu.data.split_at_mut(r * n);
                    let krow = &top[k * n + k + 1..k * n + n];
                    let rrow = &mut bottom[k + 1..n];
                    axpy(-f, krow, rrow);
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves `A X = B` in place; `b` is overwritten with `X`.
    pub fn solve_in_place(&self, b: &mut Mat) -> Result<()> {
        let n = self.n;
        if b.rows != n {
            return Err(Error::DimensionMismatch { expected: n, found: b.rows });
        }
        let k = b.cols;
        // apply the row permutation
        let src = b.data.clone();
        for (i, &p) in self.perm.iter().enumerate() {
            b.data[i * k..(i + 1) * k].copy_from_slice(&src[p * k..(p + 1) * k]);
        }
        // forward substitution with unit-lower L
        for i in 0..n {
            let (done, rest) = b.data.split_at_mut(i * k);
            let bi = &mut rest[..k];
            for j in 0..i {
                let l = self.lu[(i, j)];
                if l != 0.0 {
                    axpy(-l, &done[j * k..(j + 1) * k], bi);
                }
            }
        }
        // back substitution with U
        for i in (0..n).rev() {
            let (head, tail) = b.data.split_at_mut((i + 1) * k);
            let bi = &mut head[i * k..];
            for j in i + 1..n {
                let u = self.lu[(i, j)];
                if u != 0.0 {
                    axpy(-u, &tail[(j - i - 1) * k..(j - i) * k], bi);
                }
            }
            let d = 1.0 / self.lu[(i, i)];
            bi.iter_mut().for_each(|v| *v *= d);
        }
        Ok(())
    }

    pub fn solve_vec(&self, b: &[f64]) -> Result<Vec<f64>> {
        let mut m = Mat::column(b);
        self.solve_in_place(&mut m)?;
        Ok(m.into_vec())
    }
}

/// Solves `A X = B` by partial-pivoted LU.
pub fn solve(a: &Mat, b: &Mat) -> Result<Mat> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.rows, found: a.cols });
    }
    let lu = Lu::factor(a)?;
    let mut x = b.clone();
    lu.solve_in_place(&mut x)?;
    Ok(x)
}

pub fn solve_vec(a: &Mat, b: &[f64]) -> Result<Vec<f64>> {
    Lu::factor(a)?.solve_vec(b)
}

/// Explicit inverse, via LU applied to the identity.
pub fn invert(a: &Mat) -> Result<Mat> {
    solve(a, &Mat::identity(a.rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: &Mat, b: &Mat, tol: f64) {
        assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
        for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn solve_identity() {
        let x = solve(&Mat::identity(2), &Mat::column(&[3.0, 4.0])).unwrap();
        assert_eq!(x.as_slice(), &[3.0, 4.0]);
    }

    #[test]
    fn solve_diagonal() {
        let a = Mat::from_diag(&[2.0, 4.0]);
        let x = solve(&a, &Mat::column(&[2.0, 8.0])).unwrap();
        assert_eq!(x.as_slice(), &[1.0, 2.0]);
    }

    #[test]
    fn solve_two_by_two() {
        let a = Mat::from_rows(&[[2.0, 1.0], [1.0, 3.0]]);
        let b = Mat::column(&[3.0, 5.0]);
        let x = solve(&a, &b).unwrap();
        // multiply back
        assert_close(&a.matmul(&x).unwrap(), &b, 1e-14);
        assert_close(&x, &Mat::column(&[0.8, 1.4]), 1e-14);
    }

    #[test]
    fn solve_rejects_singular() {
        let a = Mat::from_rows(&[[1.0, 2.0], [2.0, 4.0]]);
        assert!(matches!(solve(&a, &Mat::column(&[1.0, 1.0])), Err(Error::Singular { .. })));
        assert!(matches!(invert(&Mat::zeros(3, 3)), Err(Error::Singular { .. })));
    }

    #[test]
    fn solve_needs_pivoting() {
        let a = Mat::from_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        let x = solve(&a, &Mat::column(&[2.0, 3.0])).unwrap();
        assert_eq!(x.as_slice(), &[3.0, 2.0]);
    }

    #[test]
    fn invert_examples() {
        assert_eq!(invert(&Mat::identity(3)).unwrap(), Mat::identity(3));
        assert_close(
            &invert(&Mat::from_diag(&[2.0, 0.5])).unwrap(),
            &Mat::from_diag(&[0.5, 2.0]),
            0.0,
        );
        let a = Mat::from_rows(&[[1.0, 1.0], [0.0, 1.0]]);
        let inv = invert(&a).unwrap();
        assert_close(&inv, &Mat::from_rows(&[[1.0, -1.0], [0.0, 1.0]]), 0.0);
        assert_close(&a.matmul(&inv).unwrap(), &Mat::identity(2), 0.0);
    }

    #[test]
    fn outer_examples() {
        assert_eq!(outer(&[1.0, 0.0], &[1.0, 0.0]).unwrap(), Mat::from_rows(&[[1.0, 0.0], [0.0, 0.0]]));
        assert_eq!(outer(&[0.0, 0.0], &[1.0, 1.0]).unwrap(), Mat::zeros(2, 2));
        assert_eq!(outer(&[1.0, 2.0], &[3.0, 4.0]).unwrap(), Mat::from_rows(&[[3.0, 4.0], [6.0, 8.0]]));
        assert!(matches!(outer(&[1.0], &[1.0, 2.0]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn symmetrize_examples() {
        let s = Mat::from_rows(&[[1.0, 2.0], [2.0, 5.0]]);
        assert_eq!(symmetrize(&s), s);
        let a = Mat::from_rows(&[[0.0, 2.0], [0.0, 0.0]]);
        assert_eq!(symmetrize(&a), Mat::from_rows(&[[0.0, 1.0], [1.0, 0.0]]));
    }

    #[test]
    fn push_row_checks_width() {
        let mut m = Mat::with_cols(2);
        m.push_row(&[1.0, 2.0]).unwrap();
        assert!(m.push_row(&[1.0]).is_err());
        assert_eq!(m.rows(), 1);
    }

    #[test]
    fn matvec_t_matches_transpose() {
        let a = Mat::from_rows(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]);
        let v = [1.0, -1.0];
        assert_eq!(a.matvec_t(&v).unwrap(), a.transpose().matvec(&v).unwrap());
    }
}
