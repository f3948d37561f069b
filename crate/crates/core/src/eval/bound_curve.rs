use crate::error::{Error, Result};
use crate::eval::{empirical_risk, estimate_population_risk, format_sig, vc_bound};
use crate::instance::{generate, InstanceParams, Mode};
use crate::learners::multimodal_decode;
use crate::rng::{derive_seed, seeded};

#[derive(Clone, Debug, PartialEq)]
pub struct BoundCurveConfig {
    pub mode: Mode,
    pub n: usize,
    pub m_grid: Vec<usize>,
    pub seeds: usize,
    pub master_seed: u64,
    pub n_test: usize,
    pub delta: f64,
    pub positive_target: f64,
}

impl BoundCurveConfig {
    pub fn new(mode: Mode, n: usize, m_grid: Vec<usize>, seeds: usize) -> Self {
        Self {
            mode,
            n,
            m_grid,
            seeds,
            master_seed: 0,
            n_test: 10_000,
            delta: 0.05,
            positive_target: 0.25,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundRow {
    pub m: usize,
    pub seed: u64,
    pub train_risk: f64,
    pub test_risk: f64,
    /// Bound with constant 1; present only for consistent hypotheses.
    pub bound: Option<f64>,
}

/// Decoder test risk against the bound over an `m` grid.
///
/// Replicate `s` uses the same planted instance for every `m`, so larger
/// samples extend smaller ones.
pub fn bound_curve(config: &BoundCurveConfig) -> Result<Vec<BoundRow>> {
    if config.m_grid.is_empty() || config.seeds == 0 {
        return Err(Error::invalid(
            "bound curve needs a non-empty m grid and at least one seed",
        ));
    }
    let mut rows = Vec::with_capacity(config.m_grid.len() * config.seeds);
    for &m in &config.m_grid {
        for s in 0..config.seeds as u64 {
            let seed = derive_seed(config.master_seed, s);
            let params = InstanceParams::planted(config.mode, config.n, config.positive_target, seed)?;
            let (d, w) = generate(&params, m)?;
            let h = multimodal_decode(&d)?;
            let train_risk = empirical_risk(&h, &d.xs(), &d.zs())?;
            let test_risk = estimate_population_risk(
                &h,
                &w.params(config.positive_target, seed),
                config.n_test,
                &mut seeded(derive_seed(seed, 3)),
            )?;
            let bound = if train_risk == 0.0 {
                Some(vc_bound(d.ambient_dim, m, config.delta, 1.0)?)
            } else {
                None
            };
            rows.push(BoundRow {
                m,
                seed,
                train_risk,
                test_risk,
                bound,
            });
        }
    }
    Ok(rows)
}

/// Smallest constant `C` with `test_risk ≤ C · bound` on every consistent row.
pub fn fit_bound_constant(rows: &[BoundRow]) -> f64 {
    rows.iter()
        .filter_map(|r| r.bound.map(|b| r.test_risk / b))
        .fold(0.0, f64::max)
}

pub fn bound_curve_csv(rows: &[BoundRow]) -> String {
    let mut out = String::from("m,seed,test_risk,bound\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{:.6},{}\n",
            r.m,
            r.seed,
            r.test_risk,
            r.bound.map(|b| format_sig(b, 6)).unwrap_or_default()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_curve() {
        let mut cfg = BoundCurveConfig::new(Mode::Proper, 2, vec![12, 60, 300], 3);
        cfg.n_test = 2000;
        let rows = bound_curve(&cfg).unwrap();
        assert_eq!(rows.len(), 9);
        assert!(rows.iter().all(|r| r.train_risk == 0.0 && r.bound.is_some()));
        let c = fit_bound_constant(&rows);
        assert!((0.0..=5.0).contains(&c), "{c}");
        let csv = bound_curve_csv(&rows);
        assert!(csv.starts_with("m,seed,test_risk,bound\n"));
        assert_eq!(csv.lines().count(), 10);
    }

    #[test]
    fn constant_fit_ignores_inconsistent_rows() {
        let rows = vec![
            BoundRow {
                m: 10,
                seed: 0,
                train_risk: 0.0,
                test_risk: 0.2,
                bound: Some(0.5),
            },
            BoundRow {
                m: 10,
                seed: 1,
                train_risk: 0.1,
                test_risk: 0.9,
                bound: None,
            },
        ];
        assert!((fit_bound_constant(&rows) - 0.4).abs() < 1e-15);
    }
}
