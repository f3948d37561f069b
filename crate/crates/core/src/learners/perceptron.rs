use crate::error::{Error, Result};
use crate::instance::{Halfspace, Hypothesis, Label};
use crate::linalg::{dot, norm, UnitVector};

/// Perceptron over `(x, z)` for a single halfspace `{x : rᵀx ≤ c}`.
///
/// The score is `s(x) = b·R − wᵀx` with `R = max ‖x‖` as the bias input;
/// every point with `z·s(x) ≤ 0` triggers an update. The best iterate by
/// training risk, checked after each pass, is returned.
pub fn single_halfspace_baseline<P: AsRef<[f64]>>(xs: &[P], zs: &[Label], passes: usize) -> Result<Hypothesis> {
    if xs.is_empty() || xs.len() != zs.len() {
        return Err(Error::invalid("need a non-empty sample with one label per point"));
    }
    let d = xs[0].as_ref().len();
    if d == 0 || xs.iter().any(|x| x.as_ref().len() != d) {
        return Err(Error::invalid("points must share one positive dimension"));
    }
    let radius = xs.iter().map(|x| norm(x.as_ref())).fold(0.0, f64::max).max(1e-12);

    let mut w = vec![0.0; d];
    let mut b = 0.0;
    let mut best = to_hypothesis(&w, b, radius, xs)?;
    let mut best_mistakes = best.mistakes(xs, zs);

    for _ in 0..passes {
        if best_mistakes == 0 {
            break;
        }
        let mut updates = 0;
        for (x, z) in xs.iter().zip(zs) {
            let x = x.as_ref();
            let zf = f64::from(z.as_i8());
            let s = b * radius - dot(&w, x);
            if zf * s <= 0.0 {
                for (wi, xi) in w.iter_mut().zip(x) {
                    *wi -= zf * xi;
                }
                b += zf;
                updates += 1;
            }
        }
        let h = to_hypothesis(&w, b, radius, xs)?;
        let mistakes = h.mistakes(xs, zs);
        if mistakes < best_mistakes {
            best = h;
            best_mistakes = mistakes;
        }
        if updates == 0 {
            break;
        }
    }
    Ok(best)
}

fn to_hypothesis<P: AsRef<[f64]>>(w: &[f64], b: f64, radius: f64, xs: &[P]) -> Result<Hypothesis> {
    let n = norm(w);
    let hs = if n > 0.0 {
        Halfspace::new(UnitVector::normalized(w.to_vec())?, b * radius / n)
    } else {
        // w = 0: the score is the constant b·R
        let first = xs.iter().map(|x| x.as_ref()[0]);
        let c = if b >= 0.0 {
            first.fold(f64::NEG_INFINITY, f64::max) + 1.0
        } else {
            first.fold(f64::INFINITY, f64::min) - 1.0
        };
        Halfspace::new(UnitVector::basis(w.len(), 0), c)
    };
    Hypothesis::new(vec![hs])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate, InstanceParams, Mode};
    use crate::learners::brute_force::{brute_force_erm, Budget};
    use crate::linalg::unit_sphere_sample;
    use crate::rng::seeded;
    use rand::Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn margin_separable_is_solved() {
        let mut rng = seeded(12);
        let w = unit_sphere_sample(&mut rng, 4).unwrap();
        let mut xs = Vec::new();
        let mut zs = Vec::new();
        while xs.len() < 200 {
            let x: Vec<f64> = (0..4).map(|_| rng.sample(StandardNormal)).collect();
            let s = dot(&w, &x) + 0.3;
            if s.abs() < 0.1 {
                continue;
            }
            zs.push(if s <= 0.0 { Label::Pos } else { Label::Neg });
            xs.push(x);
        }
        let h = single_halfspace_baseline(&xs, &zs, 1000).unwrap();
        assert_eq!(h.mistakes(&xs, &zs), 0);
    }

    #[test]
    fn constant_labels() {
        let xs = vec![vec![1.0, 2.0], vec![-3.0, 0.5], vec![0.0, 0.0]];
        for z in [Label::Pos, Label::Neg] {
            let zs = vec![z; 3];
            let h = single_halfspace_baseline(&xs, &zs, 50).unwrap();
            assert_eq!(h.mistakes(&xs, &zs), 0);
        }
    }

    #[test]
    fn two_constraint_instance_keeps_positive_risk() {
        // find a planted instance that no single candidate halfspace fits
        let p = InstanceParams::planted(Mode::Proper, 1, 0.3, 0).unwrap();
        let mut found = false;
        for seed in 0..50 {
            let mut p = p.clone();
            p.seed = seed;
            p.directions = vec![UnitVector::basis(1, 0), UnitVector::new(vec![-1.0]).unwrap()];
            let (d, _) = generate(&p, 14).unwrap();
            let xs = d.xs();
            let zs = d.zs();
            let exact = brute_force_erm(&xs, &zs, 1, Budget::unlimited()).unwrap();
            if exact.mistakes(&xs, &zs) == 0 {
                continue;
            }
            let h = single_halfspace_baseline(&xs, &zs, 100).unwrap();
            assert!(h.mistakes(&xs, &zs) > 0);
            found = true;
            break;
        }
        assert!(found);
    }
}
