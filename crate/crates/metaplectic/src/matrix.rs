//! Small dense matrices over a [`Scalar`] field.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type CMatrix = Matrix<Complex64>;

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
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

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == nc), "ragged rows");
        Matrix {
            rows: nr,
            cols: nc,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { T::zero() })
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

    pub fn scale(&self, s: &T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * s.clone()).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_exact_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if b.is_exact_zero() {
                        continue;
                    }
                    let v = out[(i, j)].clone() + a.clone() * b.clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(T::zero(), |acc, j| acc + self[(i, j)].clone() * v[j].clone())
            })
            .collect()
    }

    /// ab − ba.
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        Self::from_fn(h, w, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    /// [[a, b], [c, d]] for square blocks of equal size.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let n = a.rows;
        Self::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
            (true, true) => a[(i, j)].clone(),
            (true, false) => b[(i, j - n)].clone(),
            (false, true) => c[(i - n, j)].clone(),
            (false, false) => d[(i - n, j - n)].clone(),
        })
    }

    /// Gaussian elimination. Floating mode uses partial pivoting by magnitude.
    fn eliminate(&self) -> Option<(Vec<Vec<T>>, Vec<usize>, bool)> {
        let n = self.rows;
        let mut a: Vec<Vec<T>> = (0..n)
            .map(|i| (0..n).map(|j| self[(i, j)].clone()).collect())
            .collect();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut odd = false;
        for k in 0..n {
            let pivot = if T::EXACT {
                (k..n).find(|&i| !a[i][k].is_exact_zero())
            } else {
                (k..n)
                    .filter(|&i| a[i][k].abs() > 0.0)
                    .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
            }?;
            if pivot != k {
                a.swap(pivot, k);
                perm.swap(pivot, k);
                odd = !odd;
            }
            let inv = a[k][k].inv()?;
            for i in (k + 1)..n {
                if a[i][k].is_exact_zero() {
                    continue;
                }
                let f = a[i][k].clone() * inv.clone();
                for j in k..n {
                    let v = a[i][j].clone() - f.clone() * a[k][j].clone();
                    a[i][j] = v;
                }
            }
        }
        Some((a, perm, odd))
    }

    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of non-square matrix");
        match self.eliminate() {
            None => T::zero(),
            Some((u, _, odd)) => {
                let d = (0..self.rows).fold(T::one(), |acc, i| acc * u[i][i].clone());
                if odd {
                    -d
                } else {
                    d
                }
            }
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        let mut a: Vec<Vec<T>> = (0..n)
            .map(|i| {
                let mut row: Vec<T> = (0..n).map(|j| self[(i, j)].clone()).collect();
                row.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
                row
            })
            .collect();
        for k in 0..n {
            let pivot = if T::EXACT {
                (k..n).find(|&i| !a[i][k].is_exact_zero())
            } else {
                (k..n)
                    .filter(|&i| a[i][k].abs() > 0.0)
                    .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
            }
            .ok_or(Error::Singular)?;
            a.swap(pivot, k);
            let inv = a[k][k].inv().ok_or(Error::Singular)?;
            for v in a[k].iter_mut() {
                *v = v.clone() * inv.clone();
            }
            for i in 0..n {
                if i == k || a[i][k].is_exact_zero() {
                    continue;
                }
                let f = a[i][k].clone();
                for j in 0..2 * n {
                    let v = a[i][j].clone() - f.clone() * a[k][j].clone();
                    a[i][j] = v;
                }
            }
        }
        Ok(Self::from_fn(n, n, |i, j| a[i][n + j].clone()))
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        self.sub(o).max_abs()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_exact_zero())
    }

    pub fn to_c64(&self) -> CMatrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.to_c64()).collect(),
        }
    }

    pub fn from_c64(m: &CMatrix) -> Self {
        Matrix {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().map(|x| T::from_c64(*x)).collect(),
        }
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    /// Largest deviation from symmetry.
    pub fn symmetry_residual(&self) -> f64 {
        self.max_abs_diff(&self.transpose())
    }
}

impl CMatrix {
    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|x| x.im.abs()).fold(0.0, f64::max)
    }

    pub fn real_part(&self) -> CMatrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| Complex64::new(x.re, 0.0)).collect(),
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

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
/// Pivots are chosen left to right, so column order sets the tie-breaking.
pub fn rref<T: Scalar>(mut rows: Vec<Vec<T>>, ncols: usize, tol: f64) -> (Vec<Vec<T>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    let nrows = rows.len();
    let negligible = |x: &T| if T::EXACT { x.is_exact_zero() } else { x.abs() <= tol };
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let pivot = if T::EXACT {
            (r..nrows).find(|&i| !negligible(&rows[i][c]))
        } else {
            (r..nrows)
                .filter(|&i| !negligible(&rows[i][c]))
                .max_by(|&i, &j| rows[i][c].abs().total_cmp(&rows[j][c].abs()))
        };
        let Some(p) = pivot else { continue };
        rows.swap(p, r);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for v in rows[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..nrows {
            if i == r || rows[i][c].is_exact_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for j in 0..ncols {
                let v = rows[i][j].clone() - f.clone() * rows[r][j].clone();
                rows[i][j] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Rank of a list of row vectors.
pub fn rank<T: Scalar>(rows: Vec<Vec<T>>, ncols: usize, tol: f64) -> usize {
    rref(rows, ncols, tol).1.len()
}
