use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Row-major real matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, actual: data.len() });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("matrix entries must be finite".into()));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    /// Matrix whose columns are the given vectors (all of equal length).
    pub fn from_columns(columns: &[Vec<f64>]) -> Self {
        let rows = columns.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged columns");
            for (r, v) in col.iter().enumerate() {
                m[(r, c)] = *v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<f64>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn scale(&self, s: f64) -> DenseMatrix {
        DenseMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    /// `self + coef * other`.
    pub fn add_scaled(&self, other: &DenseMatrix, coef: f64) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + coef * b).collect();
        DenseMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let out_row = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for (k, &a) in self.row(r).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (o, b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len(), "vector length mismatch");
        (0..self.rows).map(|r| dot(self.row(r), x)).collect()
    }

    /// `x^T self x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        dot(&self.apply(x), x)
    }

    pub fn kron(&self, other: &DenseMatrix) -> DenseMatrix {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = self[(r, c)];
                for rr in 0..other.rows {
                    for cc in 0..other.cols {
                        out[(r * other.rows + rr, c * other.cols + cc)] = a * other[(rr, cc)];
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| crate::par::nan_max(m, v.abs()))
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| crate::par::nan_max(m, (a - b).abs()))
    }

    /// `max |A^T A - Id|`.
    pub fn orthogonality_defect(&self) -> f64 {
        self.transpose().matmul(self).max_abs_diff(&Self::identity(self.cols))
    }

    /// Determinant by partial-pivot elimination.
    pub fn det(&self) -> f64 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
                .unwrap_or(col);
            if a[pivot * n + col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                for c in 0..n {
                    a.swap(pivot * n + c, col * n + c);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in col + 1..n {
                let f = a[r * n + col] / p;
                for c in col..n {
                    a[r * n + c] -= f * a[col * n + c];
                }
            }
        }
        det
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Unit vector along `a`, or `None` when `‖a‖ < 1e-300`.
pub fn normalize(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm(a);
    (n > 1e-300).then(|| a.iter().map(|v| v / n).collect())
}

/// Angle between two nonzero vectors, `2 atan2(‖â - b̂‖, ‖â + b̂‖)`.
///
/// Accurate at both ends of `[0, π]`, where `acos` of a dot product loses
/// half the digits.
pub fn angle_between(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (norm(a), norm(b));
    let (mut diff, mut sum) = (0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (x, y) = (x / na, y / nb);
        diff += (x - y) * (x - y);
        sum += (x + y) * (x + y);
    }
    2.0 * diff.sqrt().atan2(sum.sqrt())
}

/// Orthonormalizes `vectors` in order with two passes of modified
/// Gram–Schmidt, dropping any vector whose residual falls below
/// `drop_tol` times its original norm.
pub fn modified_gram_schmidt(vectors: &[Vec<f64>], drop_tol: f64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let original = norm(v);
        if original == 0.0 {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= c * qi;
                }
            }
        }
        let n = norm(&w);
        if n > drop_tol * original {
            w.iter_mut().for_each(|x| *x /= n);
            basis.push(w);
        }
    }
    basis
}

/// Orthonormal basis of the column space of a projector `p` with known rank.
///
/// Columns are scanned in order of decreasing norm so that the best-conditioned
/// ones seed the basis.
pub fn orthonormal_column_basis(p: &DenseMatrix, rank: usize) -> Result<Vec<Vec<f64>>> {
    let mut cols = p.columns();
    cols.sort_by(|a, b| norm(b).total_cmp(&norm(a)));
    let basis = modified_gram_schmidt(&cols, 1e-6);
    if basis.len() < rank {
        return Err(Error::Degenerate(format!(
            "projector column space has dimension {} but {rank} was expected",
            basis.len()
        )));
    }
    Ok(basis.into_iter().take(rank).collect())
}

/// Thin singular value decomposition `A = U diag(s) V^T` with `s` descending.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: DenseMatrix,
    pub s: Vec<f64>,
    pub v: DenseMatrix,
}

/// One-sided Jacobi SVD of an `r x c` matrix, `r >= c` not required.
///
/// Works on the columns of `A` (or `A^T` when wide) and rotates pairs until
/// all are mutually orthogonal to machine precision.
pub fn jacobi_svd(a: &DenseMatrix) -> Svd {
    if a.rows() < a.cols() {
        let t = jacobi_svd(&a.transpose());
        return Svd { u: t.v, s: t.s, v: t.u };
    }
    let (rows, n) = (a.rows(), a.cols());
    let mut w: Vec<Vec<f64>> = a.columns();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = dot(&w[p], &w[p]);
                let beta = dot(&w[q], &w[q]);
                let gamma = dot(&w[p], &w[q]);
                if gamma == 0.0 || gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for cols in [&mut w, &mut v] {
                    for i in 0..cols[p].len() {
                        let (x, y) = (cols[p][i], cols[q][i]);
                        cols[p][i] = c * x - s * y;
                        cols[q][i] = s * x + c * y;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let sv: Vec<f64> = w.iter().map(|c| norm(c)).collect();
    order.sort_by(|&i, &j| sv[j].total_cmp(&sv[i]));
    let mut u = DenseMatrix::zeros(rows, n);
    let mut vm = DenseMatrix::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    for (k, &i) in order.iter().enumerate() {
        s.push(sv[i]);
        for r in 0..rows {
            u[(r, k)] = if sv[i] > 0.0 { w[i][r] / sv[i] } else { 0.0 };
        }
        for r in 0..n {
            vm[(r, k)] = v[i][r];
        }
    }
    Svd { u, s, v: vm }
}

pub fn singular_values(a: &DenseMatrix) -> Vec<f64> {
    jacobi_svd(a).s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, data: &[f64]) -> DenseMatrix {
        DenseMatrix::from_row_major(rows, cols, data.to_vec()).unwrap()
    }

    #[test]
    fn matmul_and_transpose() {
        let a = m(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let b = m(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        assert_eq!(a.matmul(&b), m(2, 2, &[4.0, 5.0, 10.0, 11.0]));
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.apply(&[1.0, 1.0, 1.0]), vec![6.0, 15.0]);
    }

    #[test]
    fn det_small() {
        assert_eq!(m(2, 2, &[0.0, 1.0, 1.0, 0.0]).det(), -1.0);
        let a = m(3, 3, &[2.0, 0.0, 1.0, 1.0, 3.0, 2.0, 1.0, 1.0, 1.0]);
        // cofactor expansion along the first row
        let expected = 2.0 * (3.0 - 2.0) - 0.0 + 1.0 * (1.0 - 3.0);
        assert!((a.det() - expected).abs() < 1e-14);
    }

    #[test]
    fn angle_endpoints() {
        assert_eq!(angle_between(&[1.0, 0.0], &[2.0, 0.0]), 0.0);
        assert!((angle_between(&[1.0, 0.0], &[-1.0, 0.0]) - std::f64::consts::PI).abs() < 1e-15);
        assert!((angle_between(&[1.0, 0.0], &[1.0, 1.0]) - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        let tiny = 1e-9;
        assert!((angle_between(&[1.0, 0.0], &[1.0, tiny]) - tiny).abs() < 1e-20);
    }

    #[test]
    fn gram_schmidt_drops_dependent() {
        let q = modified_gram_schmidt(&[vec![1.0, 1.0, 0.0], vec![2.0, 2.0, 0.0], vec![0.0, 1.0, 1.0]], 1e-10);
        assert_eq!(q.len(), 2);
        assert!(dot(&q[0], &q[1]).abs() < 1e-15);
    }

    #[test]
    fn svd_reconstructs() {
        let a = m(3, 2, &[3.0, 1.0, 1.0, 3.0, 0.0, 0.0]);
        let svd = jacobi_svd(&a);
        assert!((svd.s[0] - 4.0).abs() < 1e-14 && (svd.s[1] - 2.0).abs() < 1e-14);
        let mut us = svd.u.clone();
        for r in 0..3 {
            for c in 0..2 {
                us[(r, c)] *= svd.s[c];
            }
        }
        assert!(us.matmul(&svd.v.transpose()).max_abs_diff(&a) < 1e-14);
        let wide = singular_values(&a.transpose());
        assert!((wide[0] - 4.0).abs() < 1e-14);
    }
}
