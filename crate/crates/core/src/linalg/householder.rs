//! Orthogonal completion of a unit vector via a single Householder reflection.

use super::matrix::{norm, Matrix};
use crate::error::{Error, Result};

/// Inputs whose norm is further than this from one are rejected.
pub const COMPLETION_NORM_TOL: f64 = 1e-9;

/// Returns an orthogonal `d x d` matrix whose first column is `u`.
///
/// The reflection is `H = I - 2wwᵀ/‖w‖²` with `w = u + s·e₁`, where
/// `s = +1` if `u₁ > 0` and `s = -1` otherwise, so `‖w‖² = 2(1 + |u₁|)` never
/// cancels. `H e₁ = -s·u`; when `s = +1` the first column is negated, which
/// keeps the matrix orthogonal. The first column is then written as `u`
/// exactly.
pub fn orthogonal_completion(u: &[f64]) -> Result<Matrix> {
    let d = u.len();
    if d == 0 {
        return Err(Error::invalid("cannot complete an empty vector"));
    }
    if u.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("vector entries must be finite"));
    }
    let dev = (norm(u) - 1.0).abs();
    if dev > COMPLETION_NORM_TOL {
        return Err(Error::invalid(format!(
            "orthogonal completion needs a unit vector (norm deviation {dev:.3e})"
        )));
    }

    let dist_to_e1 = {
        let head = (u[0] - 1.0) * (u[0] - 1.0);
        let tail: f64 = u[1..].iter().map(|v| v * v).sum();
        (head + tail).sqrt()
    };
    if dist_to_e1 <= 1e-14 {
        return Ok(Matrix::identity(d));
    }

    let s = if u[0] > 0.0 { 1.0 } else { -1.0 };
    let mut w = u.to_vec();
    w[0] += s;
    let beta = 1.0 / (1.0 + u[0].abs());

    let mut q = Matrix::zeros(d, d);
    for i in 0..d {
        q[(i, 0)] = u[i];
        let wi = beta * w[i];
        for j in 1..d {
            let delta = if i == j { 1.0 } else { 0.0 };
            q[(i, j)] = delta - wi * w[j];
        }
    }
    Ok(q)
}
