use rand::Rng;
use rand_distr::StandardNormal;

use super::{build_fingerprint, padded_hypothesis, Dataset, InstanceParams, Row, Witness};
use crate::error::{Error, Result};
use crate::linalg::{dot, UnitVector};
use crate::rng::{derive_seed, seeded};

/// Size of the calibration draw used to place unset thresholds.
pub const CALIBRATION_DRAWS: usize = 100_000;

/// Standard Gaussian point in `ℝᵈ`.
pub fn sample_x<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.sample(StandardNormal)).collect()
}

/// Places each threshold at the same empirical quantile `q` of its
/// projection `r_jᵀx` over a calibration draw, with `q` chosen so that the
/// fraction of draws inside every halfspace is `positive_target`.
///
/// Only the leading `label_dim` coordinates of `x` affect the projections,
/// so the calibration draw samples just those.
pub fn calibrate_thresholds<R: Rng + ?Sized>(rng: &mut R, directions: &[UnitVector], positive_target: f64) -> Vec<f64> {
    let dim = directions.first().map_or(0, |d| d.dim());
    let mut proj: Vec<Vec<f64>> = vec![Vec::with_capacity(CALIBRATION_DRAWS); directions.len()];
    for _ in 0..CALIBRATION_DRAWS {
        let x = sample_x(rng, dim);
        for (p, r) in proj.iter_mut().zip(directions) {
            p.push(dot(r, &x));
        }
    }
    let sorted: Vec<Vec<f64>> = proj
        .iter()
        .map(|p| {
            let mut s = p.clone();
            s.sort_by(f64::total_cmp);
            s
        })
        .collect();
    let thresholds_at = |idx: usize| -> Vec<f64> { sorted.iter().map(|s| s[idx]).collect() };
    let accepted = |c: &[f64]| -> usize {
        (0..CALIBRATION_DRAWS)
            .filter(|&i| proj.iter().zip(c).all(|(p, &cj)| p[i] <= cj))
            .count()
    };

    // smallest common quantile index whose joint acceptance reaches the target
    let want = (positive_target * CALIBRATION_DRAWS as f64).ceil() as usize;
    let (mut lo, mut hi) = (0usize, CALIBRATION_DRAWS - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if accepted(&thresholds_at(mid)) >= want {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    thresholds_at(lo)
}

/// Samples `m` rows `(x, Qx, h*(x))` from the planted instance.
///
/// Thresholds missing from `params` are calibrated first, from the same
/// stream. The returned witness always carries the thresholds used.
pub fn generate_dataset<R: Rng + ?Sized>(params: &InstanceParams, m: usize, rng: &mut R) -> Result<(Dataset, Witness)> {
    let layout = params.validate()?;
    if m == 0 {
        return Err(Error::invalid("m must be >= 1"));
    }
    let thresholds = match &params.thresholds {
        Some(t) => t.clone(),
        None => calibrate_thresholds(rng, &params.directions, params.positive_target),
    };
    let q = build_fingerprint(params.mode, params.n, &params.directions)?;
    let planted = padded_hypothesis(&params.directions, &thresholds, layout.ambient)?;

    let rows = (0..m)
        .map(|_| {
            let x = sample_x(rng, layout.ambient);
            let y = q.mul_vec(&x)?;
            let z = planted.predict_unchecked(&x);
            Ok(Row { x, y, z })
        })
        .collect::<Result<Vec<_>>>()?;

    let dataset = Dataset {
        mode: params.mode,
        n_base: params.n,
        ambient_dim: layout.ambient,
        seed: params.seed,
        rows,
    };
    let witness = Witness {
        mode: params.mode,
        n_base: params.n,
        directions: params.directions.clone(),
        thresholds,
        q,
    };
    Ok((dataset, witness))
}

/// [`generate_dataset`] on the stream derived from `params.seed`.
pub fn generate(params: &InstanceParams, m: usize) -> Result<(Dataset, Witness)> {
    generate_dataset(params, m, &mut seeded(derive_seed(params.seed, 1)))
}
