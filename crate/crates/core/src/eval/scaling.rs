use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::eval::{format_sig, median};
use crate::instance::{generate, InstanceParams, Layout, Mode};
use crate::learners::brute_force::MAX_POINTS;
use crate::learners::{brute_force_erm, multimodal_decode, Budget};

/// Sample size as a function of the ambient dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MRule {
    TimesAmbient(usize),
    Fixed(usize),
}

impl MRule {
    pub fn m_for(self, ambient: usize) -> usize {
        match self {
            MRule::TimesAmbient(c) => c * ambient,
            MRule::Fixed(m) => m,
        }
    }
}

impl Default for MRule {
    fn default() -> Self {
        MRule::TimesAmbient(10)
    }
}

impl fmt::Display for MRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MRule::TimesAmbient(c) => write!(f, "{c}x"),
            MRule::Fixed(m) => write!(f, "{m}"),
        }
    }
}

/// `"10x"` is ten times the ambient dimension, `"200"` a fixed size.
impl FromStr for MRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("bad m rule '{s}' (expected e.g. 10x or 200)"));
        match s.strip_suffix('x') {
            Some(c) => c.parse().map(MRule::TimesAmbient).map_err(|_| bad()),
            None => s.parse().map(MRule::Fixed).map_err(|_| bad()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingConfig {
    pub mode: Mode,
    pub n_grid: Vec<usize>,
    pub m_rule: MRule,
    pub repeats: usize,
    pub seed: u64,
    pub positive_target: f64,
    /// `None` leaves brute force out of the study.
    pub brute_force: Option<Budget>,
}

impl ScalingConfig {
    pub fn new(mode: Mode, n_grid: Vec<usize>, m_rule: MRule) -> Self {
        Self {
            mode,
            n_grid,
            m_rule,
            repeats: 5,
            seed: 0,
            positive_target: 0.25,
            brute_force: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BruteForceTiming {
    Completed(f64),
    Timeout,
    Skipped,
}

impl fmt::Display for BruteForceTiming {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BruteForceTiming::Completed(ms) => f.write_str(&format_sig(*ms, 6)),
            BruteForceTiming::Timeout => f.write_str("timeout"),
            BruteForceTiming::Skipped => f.write_str("skipped"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingRow {
    pub n: usize,
    pub ambient: usize,
    pub m: usize,
    pub decoder_ms: f64,
    pub bruteforce: BruteForceTiming,
}

/// Times the decoder (and optionally brute force with `k = 2`) on one
/// planted instance per grid point: one discarded warm-up, then the median
/// of `repeats` runs. A brute-force run that exhausts its budget is recorded
/// as a timeout and not repeated.
pub fn scaling_study(config: &ScalingConfig) -> Result<Vec<ScalingRow>> {
    if config.repeats == 0 {
        return Err(Error::invalid("repeats must be >= 1"));
    }
    if config.n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("n grid must be strictly ascending"));
    }
    let mut out = Vec::with_capacity(config.n_grid.len());
    for (i, &n) in config.n_grid.iter().enumerate() {
        let layout = Layout::new(config.mode, n)?;
        let m = config.m_rule.m_for(layout.ambient);
        let params = InstanceParams::planted(
            config.mode,
            n,
            config.positive_target,
            config.seed.wrapping_add(i as u64),
        )?;
        let (dataset, _) = generate(&params, m)?;

        multimodal_decode(&dataset)?;
        let mut times: Vec<f64> = (0..config.repeats)
            .map(|_| {
                let start = Instant::now();
                multimodal_decode(&dataset).map(|_| start.elapsed().as_secs_f64() * 1e3)
            })
            .collect::<Result<_>>()?;
        let decoder_ms = median(&mut times);

        let bruteforce = match config.brute_force {
            Some(budget) if m <= MAX_POINTS => {
                let xs = dataset.xs();
                let zs = dataset.zs();
                let mut times = Vec::with_capacity(config.repeats);
                let mut timed_out = false;
                for _ in 0..=config.repeats {
                    let start = Instant::now();
                    match brute_force_erm(&xs, &zs, 2, budget) {
                        Ok(_) => times.push(start.elapsed().as_secs_f64() * 1e3),
                        Err(Error::BudgetExceeded { .. }) => {
                            timed_out = true;
                            break;
                        }
                        Err(e) => return Err(e),
                    }
                }
                if timed_out {
                    BruteForceTiming::Timeout
                } else {
                    BruteForceTiming::Completed(median(&mut times[1..]))
                }
            }
            _ => BruteForceTiming::Skipped,
        };
        out.push(ScalingRow {
            n,
            ambient: layout.ambient,
            m,
            decoder_ms,
            bruteforce,
        });
    }
    Ok(out)
}

pub fn scaling_csv(rows: &[ScalingRow]) -> String {
    let mut out = String::from("n,ambient,m,decoder_ms,bruteforce_ms\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.n,
            r.ambient,
            r.m,
            format_sig(r.decoder_ms, 6),
            r.bruteforce
        ));
    }
    out
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::invalid("need at least two paired points"));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::invalid("log-log fit needs positive finite values"));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("x values must not all coincide"));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}
