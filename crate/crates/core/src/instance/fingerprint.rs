//! Fingerprint matrices `Q = diag(I, F)` where the first column of `F`
//! stacks the planted directions.

use super::{Layout, Mode};
use crate::error::{Error, Result};
use crate::linalg::{orthogonal_completion, Matrix, UnitVector};

/// `diag(I_n, F(r1, r2))` in `ℝ^{3n x 3n}`, with `F`'s first column `(r1/√2, r2/√2)`.
pub fn build_q_proper(r1: &UnitVector, r2: &UnitVector) -> Result<Matrix> {
    if r1.dim() != r2.dim() {
        return Err(Error::invalid(format!(
            "directions differ in dimension ({} vs {})",
            r1.dim(),
            r2.dim()
        )));
    }
    embed(r1.dim(), &[r1, r2])
}

/// `diag(I_s, F(v_1, …, v_{s−1}))` in `ℝ^{n x n}` with `s = √n`; the first
/// column of `F` is the concatenation of the `v_j`, each scaled by `1/√(s−1)`.
pub fn build_q_improper(n: usize, directions: &[UnitVector]) -> Result<Matrix> {
    let layout = Layout::new(Mode::Improper, n)?;
    if directions.len() != layout.k {
        return Err(Error::invalid(format!(
            "n = {n} needs {} directions, got {}",
            layout.k,
            directions.len()
        )));
    }
    if directions.iter().any(|d| d.dim() != layout.label_dim) {
        return Err(Error::invalid(format!(
            "directions must have dimension {}",
            layout.label_dim
        )));
    }
    let refs: Vec<&UnitVector> = directions.iter().collect();
    embed(layout.label_dim, &refs)
}

pub fn build_fingerprint(mode: Mode, n: usize, directions: &[UnitVector]) -> Result<Matrix> {
    match mode {
        Mode::Proper => match directions {
            [r1, r2] => build_q_proper(r1, r2),
            _ => Err(Error::invalid("proper mode needs exactly two directions")),
        },
        Mode::Improper => build_q_improper(n, directions),
    }
}

fn embed(lead: usize, directions: &[&UnitVector]) -> Result<Matrix> {
    let scale = 1.0 / (directions.len() as f64).sqrt();
    let stacked: Vec<f64> = directions
        .iter()
        .flat_map(|d| d.iter().map(move |v| v * scale))
        .collect();
    let f = orthogonal_completion(&stacked)?;
    let dim = lead + stacked.len();
    let mut q = Matrix::zeros(dim, dim);
    for i in 0..lead {
        q[(i, i)] = 1.0;
    }
    for i in 0..stacked.len() {
        q.row_mut(lead + i)[lead..].copy_from_slice(f.row(i));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit_sphere_sample;
    use crate::rng::seeded;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn proper_n1() {
        let r = UnitVector::new(vec![1.0]).unwrap();
        let q = build_q_proper(&r, &r).unwrap();
        assert_eq!(q[(0, 0)], 1.0);
        let c = q.column(1);
        assert_eq!(c[0], 0.0);
        assert!((c[1] - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((c[2] - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn proper_fixes_planted_directions() {
        let mut rng = seeded(11);
        for n in 1..=10 {
            let r1 = unit_sphere_sample(&mut rng, n).unwrap();
            let r2 = unit_sphere_sample(&mut rng, n).unwrap();
            let q = build_q_proper(&r1, &r2).unwrap();
            for r in [&r1, &r2] {
                let p = r.padded(3 * n);
                assert_eq!(q.mul_vec(&p).unwrap(), p.as_slice());
            }
        }
    }

    #[test]
    fn proper_n8_orthogonal() {
        let mut rng = seeded(8);
        let r1 = unit_sphere_sample(&mut rng, 8).unwrap();
        let r2 = unit_sphere_sample(&mut rng, 8).unwrap();
        let q = build_q_proper(&r1, &r2).unwrap();
        assert_eq!((q.rows(), q.cols()), (24, 24));
        assert!(q.orthogonality_error() <= 1e-12);
    }

    #[test]
    fn proper_mismatch() {
        let a = UnitVector::basis(2, 0);
        let b = UnitVector::basis(3, 0);
        assert!(matches!(build_q_proper(&a, &b), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn improper_n4_first_column_is_direction() {
        let v = UnitVector::normalized(vec![0.3, -0.7]).unwrap();
        let q = build_q_improper(4, std::slice::from_ref(&v)).unwrap();
        assert_eq!(q.column(2)[2..], v[..]);
        assert_eq!(q[(0, 0)], 1.0);
        assert_eq!(q[(1, 1)], 1.0);
    }

    #[test]
    fn improper_n9_scaled_by_sqrt2() {
        let mut rng = seeded(9);
        let v1 = unit_sphere_sample(&mut rng, 3).unwrap();
        let v2 = unit_sphere_sample(&mut rng, 3).unwrap();
        let q = build_q_improper(9, &[v1.clone(), v2.clone()]).unwrap();
        let col = q.column(3);
        for i in 0..3 {
            assert!((col[3 + i] - v1[i] * FRAC_1_SQRT_2).abs() < 1e-15);
            assert!((col[6 + i] - v2[i] * FRAC_1_SQRT_2).abs() < 1e-15);
        }
    }

    #[test]
    fn improper_n16_orthogonal() {
        let mut rng = seeded(16);
        let dirs: Vec<_> = (0..3).map(|_| unit_sphere_sample(&mut rng, 4).unwrap()).collect();
        let q = build_q_improper(16, &dirs).unwrap();
        assert!(q.orthogonality_error() <= 1e-12);
    }

    #[test]
    fn improper_bad_inputs() {
        let v = UnitVector::basis(3, 0);
        assert!(build_q_improper(10, std::slice::from_ref(&v)).is_err());
        assert!(build_q_improper(9, std::slice::from_ref(&v)).is_err());
        let w = UnitVector::basis(2, 0);
        assert!(build_q_improper(9, &[w.clone(), w]).is_err());
    }
}
