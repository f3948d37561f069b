//! Exhaustive 0-1 ERM over a finite family of candidate halfspaces.
//!
//! The family holds every affine hyperplane through `d` of the input points,
//! in both orientations, with the threshold nudged by `±ε` so the defining
//! points fall on either side together, plus axis-aligned cuts at every gap
//! between sorted coordinate values. Candidates that induce the same labeling
//! of the sample are merged, and intersections are searched over all pairs,
//! with no early exit. The search is exact over this family only.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::instance::{Halfspace, Hypothesis, Label};
use crate::linalg::{dot, null_vector, UnitVector};

/// Limits on a brute-force run. `None` means unlimited.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Budget {
    /// Maximum number of candidate hypotheses (halfspaces for `k = 1`, pairs
    /// for `k = 2`) evaluated.
    pub max_candidates: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn with_time_limit(limit: Duration) -> Self {
        Self {
            max_candidates: None,
            time_limit: Some(limit),
        }
    }
}

/// Samples are packed into `u128` membership masks.
pub const MAX_POINTS: usize = 128;

const CHECK_EVERY: u64 = 1 << 14;

struct Candidate {
    halfspace: Halfspace,
    inside: u128,
}

struct Search<'a> {
    k: usize,
    budget: &'a Budget,
    start: Instant,
    evaluated: u64,
    positives: u128,
    best: Option<(Hypothesis, u32)>,
}

impl Search<'_> {
    fn over_budget(&self) -> bool {
        if let Some(max) = self.budget.max_candidates {
            if self.evaluated >= max {
                return true;
            }
        }
        match self.budget.time_limit {
            Some(limit) if self.evaluated.is_multiple_of(CHECK_EVERY) => self.start.elapsed() >= limit,
            _ => false,
        }
    }

    fn exceeded(&mut self, m: usize) -> Error {
        let (best, mistakes) = self.best.take().expect("best is seeded before enumeration");
        Error::BudgetExceeded {
            best: Box::new(best),
            best_risk: mistakes as f64 / m as f64,
            evaluated: self.evaluated,
        }
    }

    fn offer(&mut self, halfspaces: &[&Candidate], inside: u128) {
        let mistakes = (inside ^ self.positives).count_ones();
        if self.best.as_ref().is_none_or(|(_, b)| mistakes < *b) {
            let mut hs: Vec<Halfspace> = halfspaces.iter().map(|c| c.halfspace.clone()).collect();
            while hs.len() < self.k {
                hs.push(hs[hs.len() - 1].clone());
            }
            let h = Hypothesis::new(hs).expect("candidates share one dimension");
            self.best = Some((h, mistakes));
        }
    }
}

/// Minimizes empirical 0-1 risk over intersections of `k ∈ {1, 2}`
/// candidate halfspaces. Intended for tiny inputs.
pub fn brute_force_erm<P: AsRef<[f64]>>(xs: &[P], zs: &[Label], k: usize, budget: Budget) -> Result<Hypothesis> {
    if !(1..=2).contains(&k) {
        return Err(Error::invalid("brute force supports k = 1 or k = 2"));
    }
    let m = xs.len();
    if m == 0 || m != zs.len() {
        return Err(Error::invalid("need a non-empty sample with one label per point"));
    }
    if m > MAX_POINTS {
        return Err(Error::invalid(format!("brute force is limited to {MAX_POINTS} points")));
    }
    let d = xs[0].as_ref().len();
    if d == 0 || xs.iter().any(|x| x.as_ref().len() != d) {
        return Err(Error::invalid("points must share one positive dimension"));
    }

    let positives = zs
        .iter()
        .enumerate()
        .filter(|(_, z)| **z == Label::Pos)
        .fold(0u128, |acc, (i, _)| acc | (1 << i));
    let mut search = Search {
        k,
        budget: &budget,
        start: Instant::now(),
        evaluated: 0,
        positives,
        best: None,
    };

    let candidates = match enumerate_candidates(xs, &mut search) {
        Some(c) => c,
        None => return Err(search.exceeded(m)),
    };

    match k {
        1 => {
            for c in &candidates {
                if search.over_budget() {
                    return Err(search.exceeded(m));
                }
                search.evaluated += 1;
                search.offer(&[c], c.inside);
            }
        }
        _ => {
            for (i, a) in candidates.iter().enumerate() {
                for b in &candidates[i..] {
                    if search.over_budget() {
                        return Err(search.exceeded(m));
                    }
                    search.evaluated += 1;
                    let inside = a.inside & b.inside;
                    if (inside ^ positives).count_ones() < search.best.as_ref().map_or(u32::MAX, |b| b.1) {
                        search.offer(&[a, b], inside);
                    }
                }
            }
        }
    }
    Ok(search.best.take().expect("at least one candidate exists").0)
}

/// Builds the deduplicated candidate family; `None` if the time budget ran
/// out during construction.
fn enumerate_candidates<P: AsRef<[f64]>>(xs: &[P], search: &mut Search<'_>) -> Option<Vec<Candidate>> {
    let m = xs.len();
    let d = xs[0].as_ref().len();
    let scale = xs
        .iter()
        .flat_map(|x| x.as_ref().iter().map(|v| v.abs()))
        .fold(0.0, f64::max);
    let eps = 1e-6 * if scale > 0.0 { scale } else { 1.0 };

    let mut out: Vec<Candidate> = Vec::new();
    let mut seen: HashSet<u128> = HashSet::new();
    let mut push = |r: UnitVector, c: f64, out: &mut Vec<Candidate>, search: &mut Search<'_>| {
        let hs = Halfspace::new(r, c);
        let inside = xs
            .iter()
            .enumerate()
            .filter(|(_, x)| hs.contains(x.as_ref()))
            .fold(0u128, |acc, (i, _)| acc | (1 << i));
        if seen.insert(inside) {
            out.push(Candidate { halfspace: hs, inside });
            let last = out.last().expect("just pushed");
            search.offer(&[last], inside);
        }
    };

    // axis-aligned cuts
    for axis in 0..d {
        let mut vals: Vec<f64> = xs.iter().map(|x| x.as_ref()[axis]).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        let mut cuts = vec![vals[0] - 1.0];
        cuts.extend(vals.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        cuts.push(vals[vals.len() - 1] + 1.0);
        for &t in &cuts {
            push(UnitVector::basis(d, axis), t, &mut out, search);
            let mut neg = vec![0.0; d];
            neg[axis] = -1.0;
            push(UnitVector::new(neg).expect("unit"), -t, &mut out, search);
        }
    }

    // hyperplanes through d-point subsets
    if m >= d {
        let mut idx: Vec<usize> = (0..d).collect();
        let mut steps: u64 = 0;
        loop {
            steps += 1;
            if steps.is_multiple_of(CHECK_EVERY) {
                if let Some(limit) = search.budget.time_limit {
                    if search.start.elapsed() >= limit {
                        return None;
                    }
                }
            }
            let base = xs[idx[0]].as_ref();
            let diffs: Vec<Vec<f64>> = idx[1..]
                .iter()
                .map(|&i| xs[i].as_ref().iter().zip(base).map(|(a, b)| a - b).collect())
                .collect();
            if let Some(normal) = null_vector(&diffs, d) {
                if let Ok(r) = UnitVector::normalized(normal) {
                    let c = dot(&r, base);
                    let flipped = UnitVector::new(r.iter().map(|v| -v).collect()).expect("unit");
                    for delta in [eps, -eps] {
                        push(r.clone(), c + delta, &mut out, search);
                        push(flipped.clone(), -c + delta, &mut out, search);
                    }
                }
            }
            if !next_combination(&mut idx, m) {
                break;
            }
        }
    }
    Some(out)
}

/// Advances `idx` to the next size-`idx.len()` subset of `0..m` in
/// lexicographic order.
fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < m - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
