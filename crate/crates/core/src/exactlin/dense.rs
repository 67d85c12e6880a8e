//! Dense matrices over a [`Scalar`] field (f64 or exact rationals).

use std::fmt;
use std::ops::Mul;

use super::IntMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn scalar(n: usize, c: T) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { c.clone() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        Self::from_fn(m.rows(), m.cols(), |i, j| T::from_bigint(m.get(i, j)))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &T) -> Self {
        let data = self.data.iter().map(|a| a.clone() * c.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn is_negligible(&self, scale: f64, tol: f64) -> bool {
        self.data.iter().all(|v| v.is_negligible(scale, tol))
    }

    pub fn block_diagonal(blocks: &[&Matrix<T>]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
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

    /// Conjugate by a permutation of coordinates: entry `(p[i], p[j])` of the
    /// result is entry `(i, j)` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert!(self.rows == self.cols && perm.len() == self.rows);
        let mut out = Self::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(perm[i], perm[j], self.get(i, j).clone());
            }
        }
        out
    }

    fn pivot_row(a: &[T], n_cols: usize, col: usize, from: usize, rows: usize) -> Option<usize> {
        if T::EXACT {
            (from..rows).find(|&i| !a[i * n_cols + col].is_zero())
        } else {
            let mut best: Option<(usize, f64)> = None;
            for i in from..rows {
                let v = a[i * n_cols + col].to_f64().abs();
                if v > 0.0 && best.is_none_or(|(_, b)| v > b) {
                    best = Some((i, v));
                }
            }
            best.map(|(i, _)| i)
        }
    }

    /// Determinant by Gaussian elimination; the 0x0 determinant is 1.
    pub fn determinant(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = T::one();
        for k in 0..n {
            let Some(p) = Self::pivot_row(&a, n, k, k, n) else {
                return T::zero();
            };
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                det = -det;
            }
            let pivot = a[k * n + k].clone();
            det = det * pivot.clone();
            for i in k + 1..n {
                let f = a[i * n + k].clone() / pivot.clone();
                if f.is_zero() {
                    continue;
                }
                for j in k..n {
                    let v = a[k * n + j].clone() * f.clone();
                    a[i * n + j] = a[i * n + j].clone() - v;
                }
            }
        }
        det
    }

    /// Row-reduce `[self | rhs]`; returns the unique `x` with `self · x = rhs`
    /// when `self` has full column rank, checking that the overdetermined
    /// rows are consistent to within `tol`.
    pub fn solve(&self, rhs: &Matrix<T>, tol: f64) -> Result<Matrix<T>> {
        assert_eq!(self.rows, rhs.rows);
        let (m, n, k) = (self.rows, self.cols, rhs.cols);
        let width = n + k;
        let mut a: Vec<T> = Vec::with_capacity(m * width);
        for i in 0..m {
            a.extend_from_slice(&self.data[i * n..(i + 1) * n]);
            a.extend_from_slice(&rhs.data[i * k..(i + 1) * k]);
        }
        let scale = self.max_abs().max(rhs.max_abs());
        for c in 0..n {
            let p = Self::pivot_row(&a, width, c, c, m)
                .filter(|&p| !a[p * width + c].is_negligible(scale, tol))
                .ok_or_else(|| Error::DimensionMismatch("basis is rank deficient".into()))?;
            if p != c {
                for j in 0..width {
                    a.swap(c * width + j, p * width + j);
                }
            }
            let pivot = a[c * width + c].clone();
            for j in c..width {
                a[c * width + j] = a[c * width + j].clone() / pivot.clone();
            }
            for i in 0..m {
                if i == c {
                    continue;
                }
                let f = a[i * width + c].clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..width {
                    let v = a[c * width + j].clone() * f.clone();
                    a[i * width + j] = a[i * width + j].clone() - v;
                }
            }
        }
        for i in n..m {
            for j in n..width {
                let v = &a[i * width + j];
                if !v.is_negligible(scale, tol) {
                    return Err(Error::NotDescending { defect: v.to_f64().abs() });
                }
            }
        }
        Ok(Matrix::from_fn(n, k, |i, j| a[i * width + n + j].clone()))
    }

    pub fn inverse(&self) -> Option<Matrix<T>> {
        assert_eq!(self.rows, self.cols);
        self.solve(&Matrix::identity(self.rows), 1e-12).ok()
    }

    /// Rank, treating pivots below `tol` (relative) as zero.
    pub fn rank(&self, tol: f64) -> usize {
        let (m, n) = (self.rows, self.cols);
        let mut a = self.data.clone();
        let scale = self.max_abs();
        let mut r = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            let Some(p) = Self::pivot_row(&a, n, c, r, m) else { continue };
            if a[p * n + c].is_negligible(scale, tol) {
                continue;
            }
            for j in 0..n {
                a.swap(r * n + j, p * n + j);
            }
            let pivot = a[r * n + c].clone();
            for i in r + 1..m {
                let f = a[i * n + c].clone() / pivot.clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = a[r * n + j].clone() * f.clone();
                    a[i * n + j] = a[i * n + j].clone() - v;
                }
            }
            r += 1;
        }
        r
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    /// Row-major vectorization as a single column.
    pub fn to_column(&self) -> Matrix<T> {
        Matrix { rows: self.rows * self.cols, cols: 1, data: self.data.clone() }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(Scalar::to_f64).collect() }
    }

    pub fn is_one(&self) -> bool {
        *self == Self::identity(self.rows)
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out: Matrix<T> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    let v = a.clone() * rhs.get(k, j).clone();
                    out.data[idx] = out.data[idx].clone() + v;
                }
            }
        }
        out
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).render()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}
