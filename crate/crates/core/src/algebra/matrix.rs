use std::fmt;

use super::scalar::{Field, Scalar};
use super::AlgebraError;

/// Dense row-major matrix over one exact field.
///
/// Row vectors are `1 x n` matrices and column vectors `n x 1` matrices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { field, rows, cols, data }
    }

    /// Builds a matrix from row-major entries, checking length and field.
    pub fn from_vec(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Matrix, AlgebraError> {
        if data.len() != rows * cols {
            return Err(AlgebraError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|s| s.field() != field) {
            return Err(AlgebraError::FieldMismatch(field, bad.field()));
        }
        Ok(Matrix { field, rows, cols, data })
    }

    /// Builds a matrix from a list of equally long rows. `cols` disambiguates the
    /// empty case.
    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Matrix, AlgebraError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(AlgebraError::Shape(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            data.extend(row);
        }
        Matrix::from_vec(field, n, cols, data)
    }

    /// Convenience constructor from small integers, mostly for tests and fixtures.
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged integer matrix");
                r.iter().map(|&v| field.from_i64(v))
            })
            .collect();
        Matrix { field, rows: rows.len(), cols, data }
    }

    pub fn row_vector(field: Field, entries: Vec<Scalar>) -> Result<Matrix, AlgebraError> {
        let n = entries.len();
        Matrix::from_vec(field, 1, n, entries)
    }

    pub fn column_vector(field: Field, entries: Vec<Scalar>) -> Result<Matrix, AlgebraError> {
        let n = entries.len();
        Matrix::from_vec(field, n, 1, entries)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds for {}x{}", self.rows, self.cols);
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        assert!(i < self.rows && j < self.cols);
        assert_eq!(value.field(), self.field, "mixed-field matrix entry");
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    fn check_field(&self, other: &Matrix) -> Result<(), AlgebraError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(AlgebraError::FieldMismatch(self.field, other.field))
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, AlgebraError> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(AlgebraError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            let row = vec_mat(self.row(i), other);
            out.data[i * other.cols..(i + 1) * other.cols].clone_from_slice(&row);
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, AlgebraError> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, AlgebraError> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Matrix, AlgebraError> {
        self.check_field(other)?;
        if self.shape() != other.shape() {
            return Err(AlgebraError::Shape(format!(
                "shape mismatch {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(Matrix { field: self.field, rows: self.rows, cols: self.cols, data })
    }

    pub fn neg(&self) -> Matrix {
        Matrix { data: self.data.iter().map(|x| -x).collect(), ..self.clone() }
    }

    pub fn scale(&self, s: &Scalar) -> Result<Matrix, AlgebraError> {
        if s.field() != self.field {
            return Err(AlgebraError::FieldMismatch(self.field, s.field()));
        }
        Ok(Matrix { data: self.data.iter().map(|x| x * s).collect(), ..self.clone() })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Kronecker product; see [`kron`].
    pub fn kron(&self, other: &Matrix) -> Result<Matrix, AlgebraError> {
        kron(self, other)
    }

    /// `self` stacked on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix, AlgebraError> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(AlgebraError::Shape(format!("vstack of {} and {} columns", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Rank by Gaussian elimination with first-nonzero pivoting.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<Scalar>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, p);
            let inv = rows[rank][col].inverse().expect("nonzero pivot");
            let (top, below) = rows.split_at_mut(rank + 1);
            let pivot = &top[rank];
            for row in below {
                if row[col].is_zero() {
                    continue;
                }
                let factor = &row[col] * &inv;
                for (x, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                    let delta = &factor * p;
                    *x = &*x - &delta;
                }
            }
            rank += 1;
        }
        rank
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|s| s.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Kronecker product of `a` (m1 x n1) and `b` (m2 x n2).
///
/// Entry `((i1, i2), (j1, j2))` of the result is `a[i1][j1] * b[i2][j2]`, with
/// the pair `(i1, i2)` flattened to `i1 * m2 + i2` (0-based), so that tuples of
/// indices flatten most-significant first.
pub fn kron(a: &Matrix, b: &Matrix) -> Result<Matrix, AlgebraError> {
    a.check_field(b)?;
    let (m1, n1) = a.shape();
    let (m2, n2) = b.shape();
    let mut out = Matrix::zeros(a.field, m1 * m2, n1 * n2);
    for i1 in 0..m1 {
        for j1 in 0..n1 {
            let x = a.get(i1, j1);
            if x.is_zero() {
                continue;
            }
            for i2 in 0..m2 {
                for j2 in 0..n2 {
                    let y = b.get(i2, j2);
                    if y.is_zero() {
                        continue;
                    }
                    out.data[(i1 * m2 + i2) * (n1 * n2) + j1 * n2 + j2] = x * y;
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product of a sequence; the empty product is `I_1`.
pub fn kron_all<'a>(field: Field, factors: impl IntoIterator<Item = &'a Matrix>) -> Result<Matrix, AlgebraError> {
    let mut acc = Matrix::identity(field, 1);
    for f in factors {
        acc = kron(&acc, f)?;
    }
    Ok(acc)
}

/// Row vector times matrix, skipping zero entries of the vector.
///
/// Panics if the vector length does not match the row count.
pub fn vec_mat(v: &[Scalar], m: &Matrix) -> Vec<Scalar> {
    assert_eq!(v.len(), m.rows, "vector of length {} times {}x{} matrix", v.len(), m.rows, m.cols);
    let mut out = vec![m.field.zero(); m.cols];
    for (i, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (acc, y) in out.iter_mut().zip(m.row(i)) {
            acc.add_mul_assign(x, y);
        }
    }
    out
}

/// Dot product of two equally long slices.
pub fn dot(a: &[Scalar], b: &[Scalar], field: Field) -> Scalar {
    assert_eq!(a.len(), b.len());
    let mut acc = field.zero();
    for (x, y) in a.iter().zip(b) {
        acc.add_mul_assign(x, y);
    }
    acc
}

/// `(v_1 (x) ... (x) v_k) * m` for row vectors `v_l` without materializing the
/// Kronecker product; rows of `m` are indexed by flattened index tuples.
///
/// The empty tuple selects row 0 of `m`. Panics on dimension mismatch.
pub fn kron_rows_times(field: Field, vectors: &[&[Scalar]], m: &Matrix) -> Vec<Scalar> {
    let expected: usize = vectors.iter().map(|v| v.len()).product();
    assert_eq!(expected, m.rows, "kron of {:?} against {} rows", vectors.iter().map(|v| v.len()).collect::<Vec<_>>(), m.rows);
    let mut out = vec![field.zero(); m.cols];
    accumulate(vectors, 0, &field.one(), m, &mut out);
    out
}

fn accumulate(vectors: &[&[Scalar]], row: usize, coeff: &Scalar, m: &Matrix, out: &mut [Scalar]) {
    match vectors.split_first() {
        None => {
            for (acc, y) in out.iter_mut().zip(m.row(row)) {
                acc.add_mul_assign(coeff, y);
            }
        }
        Some((first, rest)) => {
            for (i, x) in first.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let c = coeff * x;
                accumulate(rest, row * first.len() + i, &c, m, out);
            }
        }
    }
}
