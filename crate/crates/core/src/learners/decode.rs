//! The multimodal decoder: recover `Q` from matched `(x, y)` pairs, read the
//! planted directions out of its fingerprint column, then fit thresholds on
//! the positive rows.

use crate::error::{Error, Result};
use crate::instance::{Dataset, Halfspace, Hypothesis, Label, Layout, Mode};
use crate::linalg::{dot, norm, select_independent_subset, solve_linear_map, Matrix, RankTolerance, UnitVector};

/// Largest tolerated norm deviation of an extracted direction before it is
/// renormalized.
pub const FINGERPRINT_NORM_TOL: f64 = 1e-6;

/// Learns an intersection of halfspaces over `x` that is consistent with
/// every row of a planted dataset.
///
/// Cost is `O(m·d²)`: the independence scan touches each row at most once
/// with `O(d²)` work, the solve is `O(d³)` with `d ≤ m`, and threshold
/// fitting is `O(m·d)`.
pub fn multimodal_decode(d: &Dataset) -> Result<Hypothesis> {
    let layout = d.layout()?;
    let ambient = layout.ambient;
    if d.ambient_dim != ambient {
        return Err(Error::invalid("dataset ambient dimension does not match its mode"));
    }
    if d.m() < ambient {
        return Err(Error::invalid(format!(
            "need at least {ambient} rows to decode, got {}",
            d.m()
        )));
    }
    if d.rows.iter().any(|r| r.x.len() != ambient || r.y.len() != ambient) {
        return Err(Error::invalid("row dimension does not match the dataset header"));
    }

    let xs = d.xs();
    let chosen = select_independent_subset(&xs, ambient, RankTolerance::default()).map_err(as_decode_failure)?;
    let sel_x: Vec<&[f64]> = chosen.iter().map(|&i| xs[i]).collect();
    let sel_y: Vec<&[f64]> = chosen.iter().map(|&i| d.rows[i].y.as_slice()).collect();
    let q = solve_linear_map(&sel_x, &sel_y).map_err(as_decode_failure)?;

    let directions: Vec<UnitVector> = recover_directions(&q, d.mode, d.n_base)?
        .iter()
        .map(|r| r.padded(ambient))
        .collect();
    let thresholds = fit_thresholds(&xs, &d.zs(), &directions);
    Hypothesis::new(
        directions
            .into_iter()
            .zip(thresholds)
            .map(|(r, c)| Halfspace::new(r, c))
            .collect(),
    )
}

fn as_decode_failure(e: Error) -> Error {
    match e {
        Error::InsufficientRank { achieved, required } => Error::DecodeFailure { achieved, required },
        other => other,
    }
}

/// Reads the planted directions out of the fingerprint block of `q`.
///
/// The block's first column sits at index `label_dim`; direction `j` occupies
/// rows `label_dim + j·label_dim ..` and was scaled by `1/√k` at build time.
pub fn recover_directions(q: &Matrix, mode: Mode, n_base: usize) -> Result<Vec<UnitVector>> {
    let layout = Layout::new(mode, n_base)?;
    if q.rows() != layout.ambient || q.cols() != layout.ambient {
        return Err(Error::invalid(format!(
            "expected a {0}x{0} matrix, got {1}x{2}",
            layout.ambient,
            q.rows(),
            q.cols()
        )));
    }
    let s = layout.label_dim;
    let scale = (layout.k as f64).sqrt();
    let column = q.column(s);
    (0..layout.k)
        .map(|j| {
            let start = s + j * s;
            let raw: Vec<f64> = column[start..start + s].iter().map(|v| v * scale).collect();
            let deviation = (norm(&raw) - 1.0).abs();
            if deviation > FINGERPRINT_NORM_TOL {
                return Err(Error::CorruptedFingerprint { index: j, deviation });
            }
            UnitVector::normalized(raw)
        })
        .collect()
}

/// `c_j = max_{x ∈ X₊} r_jᵀx`.
///
/// With no positive rows, every threshold is set one unit below the smallest
/// projection, so the hypothesis labels every training row negative.
pub fn fit_thresholds<P: AsRef<[f64]>>(xs: &[P], zs: &[Label], directions: &[UnitVector]) -> Vec<f64> {
    let any_positive = zs.contains(&Label::Pos);
    directions
        .iter()
        .map(|r| {
            let proj = xs.iter().zip(zs).map(|(x, z)| (dot(r, x.as_ref()), *z));
            if any_positive {
                proj.filter(|(_, z)| *z == Label::Pos)
                    .map(|(p, _)| p)
                    .fold(f64::NEG_INFINITY, f64::max)
            } else {
                proj.map(|(p, _)| p).fold(f64::INFINITY, f64::min) - 1.0
            }
        })
        .map(|c| if c.is_finite() { c } else { -1.0 })
        .collect()
}
