//! Random-restart hill climbing on 0-1 risk, using `x` only.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::instance::{Halfspace, Hypothesis, Label};
use crate::linalg::{dot, norm, unit_sphere_sample, UnitVector};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalSearchConfig {
    pub k: usize,
    pub restarts: usize,
    pub iters: usize,
    /// Perturbation scale at the first iteration, relative to the data scale.
    pub initial_step: f64,
    /// Ratio of the last step size to the first.
    pub final_step_ratio: f64,
}

impl LocalSearchConfig {
    pub fn new(k: usize, restarts: usize, iters: usize) -> Self {
        Self {
            k,
            restarts,
            iters,
            initial_step: 0.5,
            final_step_ratio: 0.01,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LocalSearchOutcome {
    pub hypothesis: Hypothesis,
    pub mistakes: usize,
    /// Current mistake count after each iteration, one trace per restart.
    pub traces: Vec<Vec<usize>>,
}

pub fn local_search_unimodal<P: AsRef<[f64]>, R: Rng + ?Sized>(
    xs: &[P],
    zs: &[Label],
    k: usize,
    restarts: usize,
    iters: usize,
    rng: &mut R,
) -> Result<Hypothesis> {
    Ok(local_search(xs, zs, &LocalSearchConfig::new(k, restarts, iters), rng)?.hypothesis)
}

/// Runs every restart and keeps the best iterate. The all-negative
/// hypothesis seeds the comparison, so the result never does worse than it.
pub fn local_search<P: AsRef<[f64]>, R: Rng + ?Sized>(
    xs: &[P],
    zs: &[Label],
    cfg: &LocalSearchConfig,
    rng: &mut R,
) -> Result<LocalSearchOutcome> {
    if !(1..=2).contains(&cfg.k) {
        return Err(Error::invalid("local search supports k = 1 or k = 2"));
    }
    if xs.is_empty() || xs.len() != zs.len() {
        return Err(Error::invalid("need a non-empty sample with one label per point"));
    }
    let d = xs[0].as_ref().len();
    if d == 0 || xs.iter().any(|x| x.as_ref().len() != d) {
        return Err(Error::invalid("points must share one positive dimension"));
    }
    let scale = (xs.iter().map(|x| dot(x.as_ref(), x.as_ref())).sum::<f64>() / (xs.len() * d) as f64)
        .sqrt()
        .max(1e-12);

    let mut best = all_negative(xs, cfg.k)?;
    let mut best_mistakes = best.mistakes(xs, zs);
    let mut traces = Vec::with_capacity(cfg.restarts);
    let decay = if cfg.iters > 1 {
        cfg.final_step_ratio.powf(1.0 / (cfg.iters - 1) as f64)
    } else {
        1.0
    };

    for _ in 0..cfg.restarts {
        let mut current: Vec<(Vec<f64>, f64)> = (0..cfg.k)
            .map(|_| {
                let r = unit_sphere_sample(rng, d)?.into_inner();
                let anchor = xs[rng.random_range(0..xs.len())].as_ref();
                let c = dot(&r, anchor);
                Ok((r, c))
            })
            .collect::<Result<_>>()?;
        let mut mistakes = count_mistakes(&current, xs, zs);
        let mut trace = Vec::with_capacity(cfg.iters);
        let mut step = cfg.initial_step;

        for _ in 0..cfg.iters {
            if mistakes == 0 {
                trace.push(0);
                continue;
            }
            let j = rng.random_range(0..cfg.k);
            let mut proposal = current.clone();
            let (r, c) = &mut proposal[j];
            for v in r.iter_mut() {
                *v += step * rng.sample::<f64, _>(StandardNormal);
            }
            let n = norm(r);
            if n > 0.0 {
                r.iter_mut().for_each(|v| *v /= n);
                *c += step * scale * rng.sample::<f64, _>(StandardNormal);
                let cand = count_mistakes(&proposal, xs, zs);
                if cand <= mistakes {
                    current = proposal;
                    mistakes = cand;
                }
            }
            trace.push(mistakes);
            step *= decay;
        }

        if mistakes < best_mistakes {
            best_mistakes = mistakes;
            best = to_hypothesis(&current)?;
        }
        traces.push(trace);
    }

    Ok(LocalSearchOutcome {
        hypothesis: best,
        mistakes: best_mistakes,
        traces,
    })
}

fn count_mistakes<P: AsRef<[f64]>>(hs: &[(Vec<f64>, f64)], xs: &[P], zs: &[Label]) -> usize {
    xs.iter()
        .zip(zs)
        .filter(|(x, z)| {
            let inside = hs.iter().all(|(r, c)| dot(r, x.as_ref()) <= *c);
            (inside && **z == Label::Neg) || (!inside && **z == Label::Pos)
        })
        .count()
}

fn to_hypothesis(hs: &[(Vec<f64>, f64)]) -> Result<Hypothesis> {
    Hypothesis::new(
        hs.iter()
            .map(|(r, c)| Ok(Halfspace::new(UnitVector::normalized(r.clone())?, *c)))
            .collect::<Result<_>>()?,
    )
}

/// `k` copies of a halfspace that excludes every point of the sample.
pub fn all_negative<P: AsRef<[f64]>>(xs: &[P], k: usize) -> Result<Hypothesis> {
    let d = xs
        .first()
        .map(|x| x.as_ref().len())
        .ok_or_else(|| Error::invalid("empty sample"))?;
    let r = UnitVector::basis(d, 0);
    let c = xs.iter().map(|x| x.as_ref()[0]).fold(f64::INFINITY, f64::min) - 1.0;
    Hypothesis::new(vec![Halfspace::new(r, c); k.max(1)])
}
