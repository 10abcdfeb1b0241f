//! Dense matrices over a [`Scalar`], plus a Laplace-expansion determinant
//! for polynomial entries.
//!
//! Exact scalars use fraction-free (Bareiss) elimination so intermediate
//! entries stay as small as the minors they represent; floats use partial
//! pivoting.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
}

impl<T: Clone> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
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

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// The matrix with row `r` and column `c` removed.
    pub fn minor(&self, r: usize, c: usize) -> Self {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != r) {
            for j in (0..self.cols).filter(|&j| j != c) {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            data,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut l = f.debug_list();
        for i in 0..self.rows {
            l.entry(&&self.data[i * self.cols..(i + 1) * self.cols]);
        }
        l.finish()
    }
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn mul(&self, rhs: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| {
                acc + self[(i, k)].clone() * rhs[(k, j)].clone()
            })
        }))
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    fn scale(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// Index of the pivot row for column `c` among rows `from..`.
    fn pivot(&self, c: usize, from: usize, scale: f64) -> Option<usize> {
        if T::EXACT {
            (from..self.rows).find(|&r| !self[(r, c)].is_zero())
        } else {
            let best = (from..self.rows).max_by(|&a, &b| {
                self[(a, c)]
                    .magnitude()
                    .partial_cmp(&self[(b, c)].magnitude())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })?;
            (!self[(best, c)].is_negligible(scale)).then_some(best)
        }
    }

    pub fn det(&self) -> Result<T, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::Dimension("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(T::one());
        }
        let mut a = self.clone();
        let mut sign = false;
        if T::EXACT {
            // Bareiss: after step k every entry is a (k+1)-minor of the input.
            let mut prev = T::one();
            for k in 0..n - 1 {
                let Some(p) = a.pivot(k, k, 0.0) else {
                    return Ok(T::zero());
                };
                if p != k {
                    a.swap_rows(p, k);
                    sign = !sign;
                }
                for i in k + 1..n {
                    for j in k + 1..n {
                        let v = (a[(i, j)].clone() * a[(k, k)].clone()
                            - a[(i, k)].clone() * a[(k, j)].clone())
                            / prev.clone();
                        a[(i, j)] = v;
                    }
                    a[(i, k)] = T::zero();
                }
                prev = a[(k, k)].clone();
            }
            let d = a[(n - 1, n - 1)].clone();
            Ok(if sign { T::zero() - d } else { d })
        } else {
            let scale = a.scale();
            let mut d = T::one();
            for k in 0..n {
                let Some(p) = a.pivot(k, k, scale) else {
                    return Ok(T::zero());
                };
                if p != k {
                    a.swap_rows(p, k);
                    sign = !sign;
                }
                let piv = a[(k, k)].clone();
                d = d * piv.clone();
                for i in k + 1..n {
                    let f = a[(i, k)].clone() / piv.clone();
                    for j in k..n {
                        let v = a[(i, j)].clone() - f.clone() * a[(k, j)].clone();
                        a[(i, j)] = v;
                    }
                }
            }
            Ok(if sign { T::zero() - d } else { d })
        }
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix<T>, Vec<usize>) {
        let mut a = self.clone();
        let scale = a.scale();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = a.pivot(c, r, scale) else {
                if !T::EXACT {
                    for i in r..a.rows {
                        a[(i, c)] = T::zero();
                    }
                }
                continue;
            };
            a.swap_rows(p, r);
            let piv = a[(r, c)].clone();
            for j in c..a.cols {
                let v = a[(r, j)].clone() / piv.clone();
                a[(r, j)] = v;
            }
            for i in 0..a.rows {
                if i == r || a[(i, c)].is_zero() {
                    continue;
                }
                let f = a[(i, c)].clone();
                for j in c..a.cols {
                    let v = a[(i, j)].clone() - f.clone() * a[(r, j)].clone();
                    a[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    /// Rank by fraction-free elimination (exact) or pivoted elimination
    /// with a relative threshold (floats).
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let scale = a.scale();
        let mut r = 0;
        let mut prev = T::one();
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = a.pivot(c, r, scale) else {
                continue;
            };
            a.swap_rows(p, r);
            for i in r + 1..a.rows {
                if T::EXACT {
                    for j in c + 1..a.cols {
                        let v = (a[(i, j)].clone() * a[(r, c)].clone()
                            - a[(i, c)].clone() * a[(r, j)].clone())
                            / prev.clone();
                        a[(i, j)] = v;
                    }
                } else {
                    let f = a[(i, c)].clone() / a[(r, c)].clone();
                    for j in c + 1..a.cols {
                        let v = a[(i, j)].clone() - f.clone() * a[(r, j)].clone();
                        a[(i, j)] = v;
                    }
                }
                a[(i, c)] = T::zero();
            }
            if T::EXACT {
                prev = a[(r, c)].clone();
            }
            r += 1;
        }
        r
    }

    /// Basis of the right null space `{x : A x = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![T::zero(); self.cols];
                v[f] = T::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = T::zero() - r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Solves `A x = b` for square nonsingular `A`.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>, LinalgError> {
        if self.rows != self.cols || b.len() != self.rows {
            return Err(LinalgError::Dimension("solve needs square A and matching b".into()));
        }
        let n = self.rows;
        let aug = Matrix::from_fn(n, n + 1, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        Ok((0..n).map(|i| r[(i, n)].clone()).collect())
    }

    pub fn inverse(&self) -> Result<Matrix<T>, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                T::one()
            } else {
                T::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        Ok(Matrix::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }
}

/// Determinant by Laplace expansion along successive rows, memoized on the
/// set of remaining columns. Works over any commutative ring, which is what
/// polynomial entries need. Practical up to roughly n = 12.
pub fn det_by_minors<T>(m: &Matrix<T>) -> T
where
    T: Clone + Zero + One + PartialEq,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>
        + std::ops::Add<&'a T, Output = T>
        + std::ops::Sub<&'a T, Output = T>,
{
    assert_eq!(m.rows, m.cols, "determinant of non-square matrix");
    let n = m.rows;
    assert!(n < 32, "matrix too large for minor expansion");
    let mut memo: HashMap<u32, T> = HashMap::new();
    minors_rec(m, 0, (1u32 << n) - 1, &mut memo)
}

fn minors_rec<T>(m: &Matrix<T>, row: usize, cols: u32, memo: &mut HashMap<u32, T>) -> T
where
    T: Clone + Zero + One + PartialEq,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>
        + std::ops::Add<&'a T, Output = T>
        + std::ops::Sub<&'a T, Output = T>,
{
    if cols == 0 {
        return T::one();
    }
    if let Some(v) = memo.get(&cols) {
        return v.clone();
    }
    let mut acc = T::zero();
    let mut position = 0;
    for c in 0..m.cols {
        if cols & (1 << c) == 0 {
            continue;
        }
        let entry = &m[(row, c)];
        if !entry.is_zero() {
            let sub = minors_rec(m, row + 1, cols & !(1 << c), memo);
            let term = entry * &sub;
            acc = if position % 2 == 0 {
                &acc + &term
            } else {
                &acc - &term
            };
        }
        position += 1;
    }
    memo.insert(cols, acc.clone());
    acc
}
