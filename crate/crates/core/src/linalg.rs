//! Small exact linear algebra over `Q`: dense matrices for the Λ•g* pieces
//! and column-sparse matrices for module actions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use malachite_base::num::basic::traits::{One, Zero};

use crate::rational::{is_zero, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Q;
    fn index(&self, (r, c): (usize, usize)) -> &Q {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Q {
        &mut self.data[r * self.cols + c]
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Q::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
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

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(is_zero)
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn scale(&self, s: &Q) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| (0..r).all(|c| self[(r, c)] == self[(c, r)]))
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !is_zero(b) {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !is_zero(a) && !is_zero(b))
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&Q, &Q) -> Q) -> Result<Matrix, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::Shape("elementwise shape mismatch".into()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !is_zero(&m[(r, col)])) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = Q::ONE / &m[(row, col)];
            for c in col..m.cols {
                let v = &m[(row, c)] * &inv;
                m[(row, c)] = v;
            }
            for r in 0..m.rows {
                if r == row || is_zero(&m[(r, col)]) {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in col..m.cols {
                    if is_zero(&m[(row, c)]) {
                        continue;
                    }
                    let v = &factor * &m[(row, c)];
                    m[(r, c)] -= v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one column per basis vector.
    pub fn kernel(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k[(f, j)] = Q::ONE;
            for (i, &p) in pivots.iter().enumerate() {
                k[(p, j)] = -r[(i, f)].clone();
            }
        }
        k
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::Shape("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = Q::ONE;
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        Ok(Matrix::from_fn(n, n, |r, c| red[(r, n + c)].clone()))
    }

    /// One solution of `self * x = b`, if any.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, self.cols)] = b[r].clone();
        }
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Q::ZERO; self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = red[(i, self.cols)].clone();
        }
        Some(x)
    }

    pub fn determinant(&self) -> Q {
        assert!(self.is_square(), "determinant of non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Q::ONE;
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !is_zero(&m[(r, col)])) else {
                return Q::ZERO;
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det *= &pivot;
            for r in col + 1..n {
                if is_zero(&m[(r, col)]) {
                    continue;
                }
                let factor = &m[(r, col)] / &pivot;
                for c in col..n {
                    let v = &factor * &m[(col, c)];
                    m[(r, c)] -= v;
                }
            }
        }
        det
    }

    /// Sylvester's criterion on `-self`. Returns the first failing leading
    /// minor size on failure.
    pub fn negative_definite(&self) -> Result<(), usize> {
        if !self.is_symmetric() {
            return Err(0);
        }
        let neg = -self;
        for k in 1..=self.rows {
            let minor = Matrix::from_fn(k, k, |r, c| neg[(r, c)].clone());
            if minor.determinant() <= Q::ZERO {
                return Err(k);
            }
        }
        Ok(())
    }

    /// Orthogonal projector onto the column span of `basis` (full column rank).
    pub fn column_projector(basis: &Matrix) -> Matrix {
        if basis.cols == 0 {
            return Matrix::zeros(basis.rows, basis.rows);
        }
        let bt = basis.transpose();
        let gram_inv = (&bt * basis)
            .inverse()
            .expect("basis columns must be independent");
        &(basis * &gram_inv) * &bt
    }

    /// Moore-Penrose pseudo-inverse of a symmetric matrix.
    pub fn symmetric_pseudo_inverse(&self) -> Matrix {
        assert!(self.is_symmetric(), "pseudo-inverse expects a symmetric matrix");
        let pk = Matrix::column_projector(&self.kernel());
        let shifted = self + &pk;
        &shifted.inverse().expect("shifted Laplacian is invertible") - &pk
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.zip_with(rhs, |a, b| a + b).expect("matrix add shape")
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.zip_with(rhs, |a, b| a - b).expect("matrix sub shape")
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).expect("matrix mul shape")
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(&-Q::ONE)
    }
}

/// Column-sparse square-or-rectangular matrix. Each column is a sorted list
/// of `(row, value)` pairs with nonzero values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: Vec<Vec<(usize, Q)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: (0..n).map(|i| vec![(i, Q::ONE)]).collect(),
        }
    }

    /// Builds from dense column vectors, dropping zeros.
    pub fn from_dense_columns(rows: usize, columns: Vec<Vec<Q>>) -> Self {
        let cols = columns
            .into_iter()
            .map(|col| {
                debug_assert_eq!(col.len(), rows);
                col.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !is_zero(v))
                    .collect()
            })
            .collect();
        SparseMatrix { rows, cols }
    }

    pub fn from_columns(rows: usize, mut cols: Vec<Vec<(usize, Q)>>) -> Self {
        for col in &mut cols {
            col.sort_by_key(|(r, _)| *r);
            let mut merged: Vec<(usize, Q)> = Vec::with_capacity(col.len());
            for (r, v) in col.drain(..) {
                match merged.last_mut() {
                    Some((lr, lv)) if *lr == r => *lv += v,
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|(_, v)| !is_zero(v));
            *col = merged;
        }
        SparseMatrix { rows, cols }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, c: usize) -> &[(usize, Q)] {
        &self.cols[c]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.cols[c]
            .binary_search_by_key(&r, |(row, _)| *row)
            .map(|i| self.cols[c][i].1.clone())
            .unwrap_or(Q::ZERO)
    }

    /// `out += scale * self * v` for dense `v`.
    pub fn mul_vec_acc(&self, v: &[Q], scale: &Q, out: &mut [Q]) {
        debug_assert_eq!(v.len(), self.cols());
        debug_assert_eq!(out.len(), self.rows);
        for (c, x) in v.iter().enumerate() {
            if is_zero(x) {
                continue;
            }
            let sx = x * scale;
            for (r, a) in &self.cols[c] {
                out[*r] += a * &sx;
            }
        }
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::ZERO; self.rows];
        self.mul_vec_acc(v, &Q::ONE, &mut out);
        out
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols(), other.rows, "sparse mul shape");
        let cols = other
            .cols
            .iter()
            .map(|col| {
                let mut acc = vec![Q::ZERO; self.rows];
                let mut touched = false;
                for (k, b) in col {
                    for (r, a) in &self.cols[*k] {
                        acc[*r] += a * b;
                        touched = true;
                    }
                }
                if !touched {
                    return Vec::new();
                }
                acc.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !is_zero(v))
                    .collect()
            })
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols,
        }
    }

    /// `sum_k coeffs[k] * mats[k]`.
    pub fn linear_combination(rows: usize, ncols: usize, terms: &[(Q, &SparseMatrix)]) -> Self {
        let cols = (0..ncols)
            .map(|c| {
                terms
                    .iter()
                    .filter(|(s, _)| !is_zero(s))
                    .flat_map(|(s, m)| m.cols[c].iter().map(move |(r, v)| (*r, v * s)))
                    .collect()
            })
            .collect();
        SparseMatrix::from_columns(rows, cols)
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        SparseMatrix::linear_combination(self.rows, self.cols(), &[(Q::ONE, self), (Q::ONE, other)])
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        SparseMatrix::linear_combination(self.rows, self.cols(), &[(Q::ONE, self), (-Q::ONE, other)])
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows, self.cols());
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                m[(*r, c)] = v.clone();
            }
        }
        m
    }

    pub fn trace(&self) -> Q {
        (0..self.cols().min(self.rows)).map(|i| self.get(i, i)).sum()
    }
}

/// Dense coefficient vector helpers.
pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(is_zero)
}

pub fn axpy(out: &mut [Q], a: &Q, x: &[Q]) {
    for (o, xi) in out.iter_mut().zip(x) {
        if !is_zero(xi) {
            *o += a * xi;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, Matrix::identity(3));
        assert_eq!(&inv * &a, Matrix::identity(3));
    }

    #[test]
    fn singular_detected() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(a.inverse(), Err(LinalgError::Singular));
        assert_eq!(a.rank(), 1);
        assert_eq!(a.determinant(), int(0));
    }

    #[test]
    fn kernel_is_annihilated() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let k = a.kernel();
        assert_eq!(k.cols(), 2);
        assert!((&a * &k).is_zero());
        assert_eq!(k.rank(), 2);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = m(&[&[1, 1], &[1, -1]]);
        assert_eq!(a.solve(&[int(3), int(1)]), Some(vec![int(2), int(1)]));
        let b = m(&[&[1, 1], &[2, 2]]);
        assert_eq!(b.solve(&[int(1), int(3)]), None);
    }

    #[test]
    fn sylvester() {
        assert!(m(&[&[-2, 0], &[0, -2]]).negative_definite().is_ok());
        assert_eq!(m(&[&[-2, 0], &[0, 0]]).negative_definite(), Err(2));
        assert_eq!(m(&[&[0, 0], &[0, 0]]).negative_definite(), Err(1));
    }

    #[test]
    fn pseudo_inverse_properties() {
        let a = m(&[&[2, -1, -1], &[-1, 2, -1], &[-1, -1, 2]]);
        let p = a.symmetric_pseudo_inverse();
        assert_eq!(&(&a * &p) * &a, a);
        assert_eq!(&(&p * &a) * &p, p);
        assert_eq!(p[(0, 0)], frac(2, 9));
    }

    #[test]
    fn sparse_matches_dense() {
        let a = m(&[&[1, 0, 2], &[0, 3, 0], &[4, 0, 5]]);
        let b = m(&[&[0, 1, 0], &[1, 0, 1], &[2, 0, 0]]);
        let sa = SparseMatrix::from_dense_columns(3, (0..3).map(|c| a.column(c)).collect());
        let sb = SparseMatrix::from_dense_columns(3, (0..3).map(|c| b.column(c)).collect());
        assert_eq!(sa.mul(&sb).to_dense(), &a * &b);
        assert_eq!(sa.sub(&sa).nnz(), 0);
        assert_eq!(sa.mul_vec(&[int(1), int(1), int(1)]), a.mul_vec(&[int(1), int(1), int(1)]));
    }
}
