use std::fmt;
use std::ops::{Deref, Index, IndexMut};

use crate::error::{Error, Result};

/// Dense row-major matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix must be at least 1x1");
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("matrix must be at least 1x1"));
        }
        if data.len() != rows * cols {
            return Err(Error::invalid(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("matrix entries must be finite"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::invalid(format!(
                    "row {i} has length {}, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::from_row_major(rows.len(), cols, data)
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

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        let c = self.cols;
        &mut self.data[i * c..(i + 1) * c]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
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

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::invalid(format!(
                "vector of length {} does not match {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == 0.0 {
                    continue;
                }
                let src = other.row(l);
                for (o, b) in out.row_mut(i).iter_mut().zip(src) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `max |QᵀQ − I|` over all entries; zero for an exactly orthogonal matrix.
    pub fn orthogonality_error(&self) -> f64 {
        let mut worst: f64 = if self.rows == self.cols { 0.0 } else { f64::INFINITY };
        let t = self.transpose();
        for i in 0..self.cols {
            for j in i..self.cols {
                let g = dot(t.row(i), t.row(j));
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).abs());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// `row[dst] -= f * row[src]`.
    pub fn sub_scaled_row(&mut self, src: usize, dst: usize, f: f64) {
        self.sub_scaled_row_from(src, dst, f, 0);
    }

    /// `row[dst][from..] -= f * row[src][from..]`.
    pub fn sub_scaled_row_from(&mut self, src: usize, dst: usize, f: f64, from: usize) {
        assert_ne!(src, dst);
        let c = self.cols;
        let (s, d) = if src < dst {
            let (head, tail) = self.data.split_at_mut(dst * c);
            (&head[src * c..(src + 1) * c], &mut tail[..c])
        } else {
            let (head, tail) = self.data.split_at_mut(src * c);
            (&tail[..c], &mut head[dst * c..(dst + 1) * c])
        };
        for (t, v) in d[from..].iter_mut().zip(&s[from..]) {
            *t -= f * v;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let c = self.cols;
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * c);
        head[lo * c..(lo + 1) * c].swap_with_slice(&mut tail[..c]);
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

/// Tolerance for accepting a vector as unit length when it is first built.
pub const UNIT_TOL: f64 = 1e-12;

/// A vector with Euclidean norm within [`UNIT_TOL`] of one.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitVector(Vec<f64>);

impl UnitVector {
    /// Accepts `v` as-is if it is already unit length.
    pub fn new(v: Vec<f64>) -> Result<Self> {
        check_entries(&v)?;
        let dev = (norm(&v) - 1.0).abs();
        if dev > UNIT_TOL {
            return Err(Error::invalid(format!(
                "vector is not unit length (norm deviation {dev:.3e})"
            )));
        }
        Ok(Self(v))
    }

    /// Scales `v` to unit length.
    pub fn normalized(mut v: Vec<f64>) -> Result<Self> {
        check_entries(&v)?;
        let n = norm(&v);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::invalid("cannot normalize a zero vector"));
        }
        v.iter_mut().for_each(|e| *e /= n);
        Ok(Self(v))
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        let mut v = vec![0.0; dim];
        v[index] = 1.0;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// `(self, 0, ..., 0)` of length `len`; still unit length.
    pub fn padded(&self, len: usize) -> UnitVector {
        assert!(len >= self.dim());
        let mut v = self.0.clone();
        v.resize(len, 0.0);
        UnitVector(v)
    }
}

impl Deref for UnitVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

fn check_entries(v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::invalid("vector must have dimension >= 1"));
    }
    if v.iter().any(|e| !e.is_finite()) {
        return Err(Error::invalid("vector entries must be finite"));
    }
    Ok(())
}
