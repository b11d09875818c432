//! Small dense linear algebra: the matrices here are at most a few dozen
//! rows wide (state dimension, regression columns), so plain row-major
//! storage and textbook factorizations are enough.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from a row-major buffer.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `Xᵀ v` without forming the transpose.
    pub fn tr_matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.rows, v.len(), "tr_matvec shape mismatch");
        let mut out = vec![0.0; self.cols];
        for (i, vi) in v.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a * vi;
            }
        }
        out
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn solve(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.rows();
    if a.cols() != n || b.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: b.len(),
        });
    }
    let mut m = a.clone();
    let mut x = b.to_vec();
    let scale = m.data.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[(i, col)].abs().total_cmp(&m[(j, col)].abs()))
            .unwrap_or(col);
        if m[(pivot, col)].abs() <= f64::EPSILON * scale * n as f64 {
            return Err(Error::NumericalDegeneracy("singular linear system"));
        }
        if pivot != col {
            for j in 0..n {
                m.data.swap(pivot * n + j, col * n + j);
            }
            x.swap(pivot, col);
        }
        let diag = m[(col, col)];
        for i in col + 1..n {
            let factor = m[(i, col)] / diag;
            if factor == 0.0 {
                continue;
            }
            for j in col..n {
                m[(i, j)] -= factor * m[(col, j)];
            }
            x[i] -= factor * x[col];
        }
    }
    for i in (0..n).rev() {
        let tail: f64 = (i + 1..n).map(|j| m[(i, j)] * x[j]).sum();
        x[i] = (x[i] - tail) / m[(i, i)];
    }
    Ok(x)
}

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
pub fn cholesky(a: &Matrix) -> Result<Matrix> {
    let n = a.rows();
    let mut l = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[(i, k)] * l[(j, k)]).sum();
            if i == j {
                let d = a[(i, i)] - s;
                if d <= 0.0 || !d.is_finite() {
                    return Err(Error::NumericalDegeneracy("matrix is not positive definite"));
                }
                l[(i, i)] = libm::sqrt(d);
            } else {
                l[(i, j)] = (a[(i, j)] - s) / l[(j, j)];
            }
        }
    }
    Ok(l)
}

/// Ordinary least squares solution via Householder QR.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    pub coefficients: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Diagonal of `(XᵀX)⁻¹`.
    pub unscaled_cov_diag: Vec<f64>,
    pub rss: f64,
}

pub fn least_squares(x: &Matrix, y: &[f64]) -> Result<LeastSquares> {
    let (n, k) = (x.rows(), x.cols());
    if y.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: y.len(),
        });
    }
    if n < k {
        return Err(Error::InsufficientData {
            what: "least squares",
            needed: k,
            got: n,
        });
    }
    let mut r = x.clone();
    let mut qty = y.to_vec();
    let col_scale: Vec<f64> = (0..k)
        .map(|j| libm::sqrt((0..n).map(|i| x[(i, j)] * x[(i, j)]).sum::<f64>()))
        .collect();

    for j in 0..k {
        let norm = libm::sqrt((j..n).map(|i| r[(i, j)] * r[(i, j)]).sum::<f64>());
        if norm <= 1e-12 * col_scale[j].max(f64::MIN_POSITIVE) || norm == 0.0 {
            return Err(Error::NumericalDegeneracy("rank-deficient regression matrix"));
        }
        let alpha = if r[(j, j)] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (j..n).map(|i| r[(i, j)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|a| a * a).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for c in j..k {
            let dot: f64 = (j..n).map(|i| v[i - j] * r[(i, c)]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in j..n {
                r[(i, c)] -= f * v[i - j];
            }
        }
        let dot: f64 = (j..n).map(|i| v[i - j] * qty[i]).sum();
        let f = 2.0 * dot / vnorm2;
        for i in j..n {
            qty[i] -= f * v[i - j];
        }
    }

    let mut beta = vec![0.0; k];
    for i in (0..k).rev() {
        let tail: f64 = (i + 1..k).map(|j| r[(i, j)] * beta[j]).sum();
        beta[i] = (qty[i] - tail) / r[(i, i)];
    }

    // R⁻¹ (upper triangular); (XᵀX)⁻¹ = R⁻¹ R⁻ᵀ
    let mut rinv = Matrix::zeros(k, k);
    for c in 0..k {
        rinv[(c, c)] = 1.0 / r[(c, c)];
        for i in (0..c).rev() {
            let s: f64 = (i + 1..=c).map(|j| r[(i, j)] * rinv[(j, c)]).sum();
            rinv[(i, c)] = -s / r[(i, i)];
        }
    }
    let unscaled_cov_diag = (0..k)
        .map(|i| (i..k).map(|j| rinv[(i, j)] * rinv[(i, j)]).sum())
        .collect();

    let fitted = x.matvec(&beta);
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    let rss = residuals.iter().map(|e| e * e).sum();
    Ok(LeastSquares {
        coefficients: beta,
        residuals,
        unscaled_cov_diag,
        rss,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_small_system() {
        let a = Matrix::from_row_major(3, 3, vec![2.0, 1.0, -1.0, -3.0, -1.0, 2.0, -2.0, 1.0, 2.0]).unwrap();
        let x = solve(&a, &[8.0, -11.0, -3.0]).unwrap();
        for (got, want) in x.iter().zip([2.0, 3.0, -1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_system_is_reported() {
        let a = Matrix::from_row_major(2, 2, vec![1.0, 2.0, 2.0, 4.0]).unwrap();
        assert!(matches!(solve(&a, &[1.0, 2.0]), Err(Error::NumericalDegeneracy(_))));
    }

    #[test]
    fn cholesky_reconstructs() {
        let a = Matrix::from_row_major(2, 2, vec![4.0, 2.0, 2.0, 3.0]).unwrap();
        let l = cholesky(&a).unwrap();
        let back = l.matmul(&l.transpose());
        for i in 0..2 {
            for j in 0..2 {
                assert!((back[(i, j)] - a[(i, j)]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn least_squares_line_fit() {
        // y = 1 + 2x exactly
        let xs = [0.0, 1.0, 2.0, 3.0, 4.0];
        let mut data = Vec::new();
        for &v in &xs {
            data.extend_from_slice(&[1.0, v]);
        }
        let x = Matrix::from_row_major(5, 2, data).unwrap();
        let y: Vec<f64> = xs.iter().map(|v| 1.0 + 2.0 * v).collect();
        let fit = least_squares(&x, &y).unwrap();
        assert!((fit.coefficients[0] - 1.0).abs() < 1e-12);
        assert!((fit.coefficients[1] - 2.0).abs() < 1e-12);
        assert!(fit.rss < 1e-20);
        // (XᵀX)⁻¹ for this design: [[0.6, -0.2], [-0.2, 0.1]]
        assert!((fit.unscaled_cov_diag[0] - 0.6).abs() < 1e-12);
        assert!((fit.unscaled_cov_diag[1] - 0.1).abs() < 1e-12);
    }
}
