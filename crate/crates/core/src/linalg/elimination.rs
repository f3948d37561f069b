//! Gaussian elimination: incremental rank tests, LU solves and null vectors.

use super::matrix::{max_abs, norm, Matrix};
use crate::error::{Error, Result};

/// Pivot threshold for [`select_independent_subset`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RankTolerance {
    /// Pivots must exceed this value.
    Absolute(f64),
    /// Pivots must exceed this factor times the largest point norm seen so far.
    Relative(f64),
}

impl Default for RankTolerance {
    fn default() -> Self {
        RankTolerance::Relative(1e-8)
    }
}

/// Scans `points` in order and keeps the first `k` that are linearly
/// independent of the ones already kept.
///
/// Each candidate is reduced against the kept set (maintained in echelon
/// form), so a single test costs `O(k·d)` and the whole scan `O(m·k·d)`.
pub fn select_independent_subset<P: AsRef<[f64]>>(points: &[P], k: usize, tol: RankTolerance) -> Result<Vec<usize>> {
    let d = points.first().map_or(0, |p| p.as_ref().len());
    if k > d && !points.is_empty() {
        return Err(Error::invalid(format!(
            "cannot select {k} independent points in dimension {d}"
        )));
    }
    let mut basis: Vec<(Vec<f64>, usize)> = Vec::with_capacity(k);
    let mut chosen = Vec::with_capacity(k);
    let mut max_norm: f64 = 0.0;

    for (idx, p) in points.iter().enumerate() {
        if chosen.len() == k {
            break;
        }
        let p = p.as_ref();
        if p.len() != d {
            return Err(Error::invalid(format!(
                "point {idx} has dimension {}, expected {d}",
                p.len()
            )));
        }
        max_norm = max_norm.max(norm(p));
        let threshold = match tol {
            RankTolerance::Absolute(t) => t,
            RankTolerance::Relative(r) => r * max_norm,
        };

        let mut residual = p.to_vec();
        for (b, pivot) in &basis {
            let f = residual[*pivot] / b[*pivot];
            if f != 0.0 {
                for (r, bv) in residual.iter_mut().zip(b) {
                    *r -= f * bv;
                }
                residual[*pivot] = 0.0;
            }
        }
        let (pivot, mag) = residual
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.abs()))
            .fold((0, 0.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if mag > threshold {
            basis.push((residual, pivot));
            chosen.push(idx);
        }
    }

    if chosen.len() < k {
        return Err(Error::InsufficientRank {
            achieved: chosen.len(),
            required: k,
        });
    }
    Ok(chosen)
}

/// Row-pivoted LU factorization `PA = LU` of a square matrix.
#[derive(Clone, Debug)]
pub struct LuFactors {
    lu: Matrix,
    perm: Vec<usize>,
}

impl LuFactors {
    pub fn factor(a: &Matrix) -> Result<Self> {
        let n = a.rows();
        if a.cols() != n {
            return Err(Error::invalid("LU factorization needs a square matrix"));
        }
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let tiny = a.max_abs() * n as f64 * f64::EPSILON;

        for col in 0..n {
            let (p, mag) =
                (col..n)
                    .map(|r| (r, lu[(r, col)].abs()))
                    .fold((col, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
            if mag <= tiny {
                return Err(Error::InsufficientRank {
                    achieved: col,
                    required: n,
                });
            }
            lu.swap_rows(col, p);
            perm.swap(col, p);
            let pivot = lu[(col, col)];
            for r in col + 1..n {
                let f = lu[(r, col)] / pivot;
                lu[(r, col)] = f;
                if f == 0.0 {
                    continue;
                }
                lu.sub_scaled_row_from(col, r, f, col + 1);
            }
        }
        Ok(Self { lu, perm })
    }

    /// Solves `A X = B` in place for every column of `b`.
    pub fn solve_many(&self, b: &Matrix) -> Result<Matrix> {
        let n = self.lu.rows();
        if b.rows() != n {
            return Err(Error::invalid("right-hand side has wrong number of rows"));
        }
        let mut x = Matrix::zeros(n, b.cols());
        for (i, &p) in self.perm.iter().enumerate() {
            x.row_mut(i).copy_from_slice(b.row(p));
        }
        // forward: L has unit diagonal
        for i in 0..n {
            for l in 0..i {
                let f = self.lu[(i, l)];
                if f == 0.0 {
                    continue;
                }
                x.sub_scaled_row(l, i, f);
            }
        }
        // backward
        for i in (0..n).rev() {
            for l in i + 1..n {
                let f = self.lu[(i, l)];
                if f == 0.0 {
                    continue;
                }
                x.sub_scaled_row(l, i, f);
            }
            let d = self.lu[(i, i)];
            x.row_mut(i).iter_mut().for_each(|v| *v /= d);
        }
        Ok(x)
    }
}

/// Finds the square matrix `Q` with `Q x_i = y_i` for every pair.
///
/// `xs` must hold `d` linearly independent vectors of dimension `d`. The
/// system is solved as `Xᵀ Qᵀ = Yᵀ` with a single factorization of `Xᵀ`
/// reused for all `d` right-hand sides.
pub fn solve_linear_map<P: AsRef<[f64]>, R: AsRef<[f64]>>(xs: &[P], ys: &[R]) -> Result<Matrix> {
    let d = xs.first().map_or(0, |x| x.as_ref().len());
    if d == 0 || xs.len() != d {
        return Err(Error::invalid(format!(
            "need exactly {d} input vectors of dimension {d}, got {}",
            xs.len()
        )));
    }
    if ys.len() != d {
        return Err(Error::invalid("inputs and outputs differ in count"));
    }
    if ys.iter().any(|y| y.as_ref().len() != d) {
        return Err(Error::invalid("output vectors must have dimension d"));
    }
    let a = Matrix::from_rows(xs)?;
    let b = Matrix::from_rows(ys)?;
    let lu = LuFactors::factor(&a)?;
    Ok(lu.solve_many(&b)?.transpose())
}

/// A unit vector orthogonal to every row of `rows` (`d−1` vectors in `ℝᵈ`).
///
/// Returns `None` when the rows are rank deficient.
pub fn null_vector<P: AsRef<[f64]>>(rows: &[P], d: usize) -> Option<Vec<f64>> {
    if d == 0 || rows.len() + 1 != d {
        return None;
    }
    let mut m: Vec<Vec<f64>> = rows.iter().map(|r| r.as_ref().to_vec()).collect();
    let scale = m.iter().map(|r| max_abs(r)).fold(0.0, f64::max);
    let tiny = scale * d as f64 * 1e-12;
    let mut pivots = Vec::with_capacity(d - 1);
    let mut used = vec![false; d];

    for row in 0..m.len() {
        // complete pivoting over remaining rows and unused columns
        let mut best = (row, 0, 0.0);
        for (r, mr) in m.iter().enumerate().skip(row) {
            for (c, v) in mr.iter().enumerate() {
                if !used[c] && v.abs() > best.2 {
                    best = (r, c, v.abs());
                }
            }
        }
        if best.2 <= tiny {
            return None;
        }
        m.swap(row, best.0);
        let col = best.1;
        used[col] = true;
        let pv = m[row][col];
        let pivot_row = m[row].clone();
        for (r, mr) in m.iter_mut().enumerate() {
            if r == row {
                continue;
            }
            let f = mr[col] / pv;
            if f != 0.0 {
                for (t, s) in mr.iter_mut().zip(&pivot_row) {
                    *t -= f * s;
                }
            }
        }
        pivots.push((row, col));
    }
    let free = used.iter().position(|u| !u)?;
    let mut v = vec![0.0; d];
    v[free] = 1.0;
    for &(row, col) in &pivots {
        v[col] = -m[row][free] / m[row][col];
    }
    let n = norm(&v);
    v.iter_mut().for_each(|e| *e /= n);
    Some(v)
}
