use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        IntMatrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Build from small-integer rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        Self::from_fn(nrows, ncols, |i, j| {
            let row = rows[i].as_ref();
            assert_eq!(row.len(), ncols, "ragged rows");
            BigInt::from(row[j])
        })
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { BigInt::from(entries[i]) } else { BigInt::zero() })
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

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        let data = self.data.iter().map(|a| a * c).collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn block_diagonal(blocks: &[&IntMatrix]) -> IntMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = IntMatrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn select_rows(&self, range: std::ops::Range<usize>) -> IntMatrix {
        let start = range.start;
        let n = range.len();
        Self::from_fn(n, self.cols, |i, j| self.get(start + i, j).clone())
    }

    pub fn select_cols(&self, range: std::ops::Range<usize>) -> IntMatrix {
        let start = range.start;
        let n = range.len();
        Self::from_fn(self.rows, n, |i, j| self.get(i, start + j).clone())
    }

    pub fn trace(&self) -> BigInt {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i).clone()).sum()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j]) / &prev;
                    a[i * n + j] = v;
                }
            }
            prev = a[k * n + k].clone();
        }
        sign * a[n * n - 1].clone()
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * c;
            if !v.is_zero() {
                self.data[dst * self.cols + j] += v;
            }
        }
    }

    /// col[dst] += c * col[src]
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * c;
            if !v.is_zero() {
                self.data[i * self.cols + dst] += v;
            }
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = &mut self.data[i * self.cols + j];
            *v = -std::mem::take(v);
        }
    }

    pub(crate) fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = &mut self.data[i * self.cols + j];
            *v = -std::mem::take(v);
        }
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = IntMatrix::from_rows(&[[2, -1, 0], [1, 3, 4], [0, 5, -2]]);
        // 2*(3*-2 - 4*5) - (-1)*(1*-2 - 0) + 0
        assert_eq!(m.determinant(), BigInt::from(2 * (-6 - 20) - 2));
        assert_eq!(IntMatrix::zeros(0, 0).determinant(), BigInt::one());
        let singular = IntMatrix::from_rows(&[[1, 2], [2, 4]]);
        assert!(singular.determinant().is_zero());
        let needs_swap = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
        assert_eq!(needs_swap.determinant(), BigInt::from(-1));
    }
}
