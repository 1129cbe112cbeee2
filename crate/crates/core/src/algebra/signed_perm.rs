use super::DenseMatrix;
use crate::{Error, Result};

/// Exact `n x n` matrix with a single `±1` entry in every row and column.
///
/// Column `c` holds `sign[c]` at row `row[c]`. Such matrices are closed under
/// products, transposes, negation, block assembly and Kronecker products, so
/// every constructed Clifford generator stays exact and relation checks reduce
/// to integer comparisons.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPermMatrix {
    row: Vec<usize>,
    sign: Vec<i8>,
}

impl SignedPermMatrix {
    pub fn new(row: Vec<usize>, sign: Vec<i8>) -> Result<Self> {
        let n = row.len();
        if sign.len() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: sign.len() });
        }
        let mut seen = vec![false; n];
        for (&r, &s) in row.iter().zip(&sign) {
            if r >= n || seen[r] {
                return Err(Error::InvalidParameter(format!("row index {r} repeated or out of range")));
            }
            if s != 1 && s != -1 {
                return Err(Error::InvalidParameter(format!("sign must be ±1, got {s}")));
            }
            seen[r] = true;
        }
        Ok(SignedPermMatrix { row, sign })
    }

    pub fn identity(n: usize) -> Self {
        SignedPermMatrix { row: (0..n).collect(), sign: vec![1; n] }
    }

    /// Recognizes a dense matrix whose entries are exactly `0` or `±1` in a
    /// signed-permutation pattern.
    pub fn from_dense(m: &DenseMatrix) -> Option<Self> {
        if m.rows() != m.cols() {
            return None;
        }
        let n = m.rows();
        let mut row = Vec::with_capacity(n);
        let mut sign = Vec::with_capacity(n);
        for c in 0..n {
            let mut hit = None;
            for r in 0..n {
                let v = m[(r, c)];
                if v == 0.0 {
                    continue;
                }
                if hit.is_some() || (v != 1.0 && v != -1.0) {
                    return None;
                }
                hit = Some((r, if v > 0.0 { 1 } else { -1 }));
            }
            let (r, s) = hit?;
            row.push(r);
            sign.push(s);
        }
        SignedPermMatrix::new(row, sign).ok()
    }

    pub(crate) fn from_columns(columns: &[Vec<f64>]) -> Option<Self> {
        let n = columns.len();
        let mut m = DenseMatrix::zeros(n, n);
        for (c, col) in columns.iter().enumerate() {
            if col.len() != n {
                return None;
            }
            for (r, v) in col.iter().enumerate() {
                m[(r, c)] = *v;
            }
        }
        Self::from_dense(&m)
    }

    pub fn dim(&self) -> usize {
        self.row.len()
    }

    /// `(row, sign)` of the nonzero entry of column `c`.
    pub fn column(&self, c: usize) -> (usize, i8) {
        (self.row[c], self.sign[c])
    }

    pub fn entry(&self, r: usize, c: usize) -> i8 {
        if self.row[c] == r {
            self.sign[c]
        } else {
            0
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        self.apply_add(x, 1.0, &mut y);
        y
    }

    /// `out += coef * self * x`.
    pub fn apply_add(&self, x: &[f64], coef: f64, out: &mut [f64]) {
        for (c, (&r, &s)) in self.row.iter().zip(&self.sign).enumerate() {
            out[r] += coef * f64::from(s) * x[c];
        }
    }

    /// `<self x, x>` without allocating.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.row
            .iter()
            .zip(&self.sign)
            .enumerate()
            .map(|(c, (&r, &s))| f64::from(s) * x[c] * x[r])
            .sum()
    }

    pub fn mul(&self, other: &SignedPermMatrix) -> SignedPermMatrix {
        assert_eq!(self.dim(), other.dim(), "signed permutation dimension mismatch");
        let (row, sign) = other
            .row
            .iter()
            .zip(&other.sign)
            .map(|(&rb, &sb)| (self.row[rb], self.sign[rb] * sb))
            .unzip();
        SignedPermMatrix { row, sign }
    }

    pub fn transpose(&self) -> SignedPermMatrix {
        let n = self.dim();
        let mut row = vec![0; n];
        let mut sign = vec![0; n];
        for c in 0..n {
            row[self.row[c]] = c;
            sign[self.row[c]] = self.sign[c];
        }
        SignedPermMatrix { row, sign }
    }

    pub fn neg(&self) -> SignedPermMatrix {
        SignedPermMatrix { row: self.row.clone(), sign: self.sign.iter().map(|s| -s).collect() }
    }

    pub fn trace(&self) -> i64 {
        (0..self.dim()).filter(|&c| self.row[c] == c).map(|c| i64::from(self.sign[c])).sum()
    }

    /// Largest entry of `|self + coef * other|`, computed exactly.
    pub fn max_abs_sum(&self, other: &SignedPermMatrix, coef: i8) -> u8 {
        assert_eq!(self.dim(), other.dim(), "signed permutation dimension mismatch");
        (0..self.dim())
            .map(|c| {
                if self.row[c] == other.row[c] {
                    (self.sign[c] + coef * other.sign[c]).unsigned_abs()
                } else {
                    1
                }
            })
            .max()
            .unwrap_or(0)
    }

    /// Block diagonal `diag(blocks[0], blocks[1], ...)`.
    pub fn direct_sum(blocks: &[SignedPermMatrix]) -> SignedPermMatrix {
        let mut row = Vec::new();
        let mut sign = Vec::new();
        let mut offset = 0;
        for b in blocks {
            row.extend(b.row.iter().map(|r| r + offset));
            sign.extend_from_slice(&b.sign);
            offset += b.dim();
        }
        SignedPermMatrix { row, sign }
    }

    /// `2d x 2d` matrix `[[top_left, top_right], [bottom_left, bottom_right]]`
    /// from `d x d` blocks, where each block column has exactly one block present.
    pub fn block2(
        top_left: Option<&SignedPermMatrix>,
        top_right: Option<&SignedPermMatrix>,
        bottom_left: Option<&SignedPermMatrix>,
        bottom_right: Option<&SignedPermMatrix>,
    ) -> Result<SignedPermMatrix> {
        fn pick<'a>(top: Option<&'a SignedPermMatrix>, bottom: Option<&'a SignedPermMatrix>) -> Result<(&'a SignedPermMatrix, usize)> {
            match (top, bottom) {
                (Some(t), None) => Ok((t, 0)),
                (None, Some(b)) => Ok((b, 1)),
                _ => Err(Error::InvalidParameter(
                    "each block column needs exactly one block to stay a signed permutation".into(),
                )),
            }
        }
        let (left, left_half) = pick(top_left, bottom_left)?;
        let (right, right_half) = pick(top_right, bottom_right)?;
        let d = left.dim();
        if right.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, actual: right.dim() });
        }
        let mut row = Vec::with_capacity(2 * d);
        let mut sign = Vec::with_capacity(2 * d);
        for (block, half) in [(left, left_half), (right, right_half)] {
            row.extend(block.row.iter().map(|r| r + half * d));
            sign.extend_from_slice(&block.sign);
        }
        SignedPermMatrix::new(row, sign)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &SignedPermMatrix) -> SignedPermMatrix {
        let nb = other.dim();
        let mut row = Vec::with_capacity(self.dim() * nb);
        let mut sign = Vec::with_capacity(self.dim() * nb);
        for ca in 0..self.dim() {
            for cb in 0..nb {
                row.push(self.row[ca] * nb + other.row[cb]);
                sign.push(self.sign[ca] * other.sign[cb]);
            }
        }
        SignedPermMatrix { row, sign }
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.dim();
        let mut m = DenseMatrix::zeros(n, n);
        for c in 0..n {
            m[(self.row[c], c)] = f64::from(self.sign[c]);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SignedPermMatrix {
        SignedPermMatrix::new(vec![2, 0, 1], vec![1, -1, -1]).unwrap()
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(SignedPermMatrix::new(vec![0, 0], vec![1, 1]).is_err());
        assert!(SignedPermMatrix::new(vec![0, 1], vec![1, 2]).is_err());
        assert!(SignedPermMatrix::new(vec![0, 3], vec![1, 1]).is_err());
    }

    #[test]
    fn ops_match_dense() {
        let a = sample();
        let b = SignedPermMatrix::new(vec![1, 2, 0], vec![-1, 1, 1]).unwrap();
        assert_eq!(a.mul(&b).to_dense(), a.to_dense().matmul(&b.to_dense()));
        assert_eq!(a.transpose().to_dense(), a.to_dense().transpose());
        assert_eq!(a.kron(&b).to_dense(), a.to_dense().kron(&b.to_dense()));
        let x = [0.5, -2.0, 3.0];
        assert_eq!(a.apply(&x), a.to_dense().apply(&x));
        let q: f64 = a.apply(&x).iter().zip(&x).map(|(p, q)| p * q).sum();
        assert_eq!(a.quadratic_form(&x), q);
        assert_eq!(SignedPermMatrix::from_dense(&a.to_dense()), Some(a.clone()));
        assert!(a.mul(&a.transpose()) == SignedPermMatrix::identity(3));
    }

    #[test]
    fn max_abs_sum_exact() {
        let id = SignedPermMatrix::identity(3);
        assert_eq!(id.max_abs_sum(&id, -1), 0);
        assert_eq!(id.max_abs_sum(&id, 1), 2);
        assert_eq!(id.max_abs_sum(&sample(), 1), 1);
    }

    #[test]
    fn block_assembly() {
        let id = SignedPermMatrix::identity(2);
        let swap = SignedPermMatrix::block2(None, Some(&id), Some(&id), None).unwrap();
        assert_eq!(swap.apply(&[1.0, 2.0, 3.0, 4.0]), vec![3.0, 4.0, 1.0, 2.0]);
        assert!(SignedPermMatrix::block2(Some(&id), None, Some(&id), Some(&id)).is_err());
        let ds = SignedPermMatrix::direct_sum(&[id.neg(), sample()]);
        assert_eq!(ds.dim(), 5);
        assert_eq!(ds.trace(), -2);
    }
}
