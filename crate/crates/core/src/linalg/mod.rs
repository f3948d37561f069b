//! Dense linear algebra used by the instance builder and the decoder.

mod elimination;
mod householder;
mod matrix;

pub use elimination::{null_vector, select_independent_subset, solve_linear_map, LuFactors, RankTolerance};
pub use householder::{orthogonal_completion, COMPLETION_NORM_TOL};
pub use matrix::{dot, max_abs, norm, Matrix, UnitVector, UNIT_TOL};

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Uniform draw from the unit sphere in `ℝᵈ` (normalized standard Gaussian).
pub fn unit_sphere_sample<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Result<UnitVector> {
    if d == 0 {
        return Err(Error::invalid("sphere dimension must be >= 1"));
    }
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        if norm(&v) > 1e-150 {
            return UnitVector::normalized(v);
        }
    }
}
