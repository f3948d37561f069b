//! Risk measurement, the VC-style generalization bound, and experiment
//! orchestration.

mod bound_curve;
mod experiment;
mod scaling;

pub use bound_curve::{bound_curve, bound_curve_csv, fit_bound_constant, BoundCurveConfig, BoundRow};
pub use experiment::{
    report_csv, run_experiment, BaselineSettings, Cell, ExperimentConfig, ExperimentReport, ReportRow, REPORT_HEADER,
};
pub use scaling::{loglog_slope, scaling_csv, scaling_study, BruteForceTiming, MRule, ScalingConfig, ScalingRow};

use rand::Rng;

use crate::error::{Error, Result};
use crate::instance::{sample_x, Hypothesis, InstanceParams, Label};

/// Fraction of rows where `h` disagrees with the label.
pub fn empirical_risk<P: AsRef<[f64]>>(h: &Hypothesis, xs: &[P], zs: &[Label]) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::invalid("empirical risk needs at least one row"));
    }
    if xs.len() != zs.len() {
        return Err(Error::invalid("one label per row is required"));
    }
    let mut wrong = 0usize;
    for (x, z) in xs.iter().zip(zs) {
        if h.predict(x.as_ref())? != *z {
            wrong += 1;
        }
    }
    Ok(wrong as f64 / xs.len() as f64)
}

/// Monte Carlo estimate of `P(h(x) ≠ z)` on fresh draws from the planted
/// instance described by `params` (thresholds must be set).
pub fn estimate_population_risk<R: Rng + ?Sized>(
    h: &Hypothesis,
    params: &InstanceParams,
    n_test: usize,
    rng: &mut R,
) -> Result<f64> {
    if n_test == 0 {
        return Err(Error::invalid("n_test must be >= 1"));
    }
    let planted = params.planted_hypothesis()?;
    if h.dim() != planted.dim() {
        return Err(Error::invalid(format!(
            "hypothesis has dimension {}, instance has {}",
            h.dim(),
            planted.dim()
        )));
    }
    let wrong = (0..n_test)
        .filter(|_| {
            let x = sample_x(rng, planted.dim());
            h.predict_unchecked(&x) != planted.predict_unchecked(&x)
        })
        .count();
    Ok(wrong as f64 / n_test as f64)
}

/// `C · √((d·ln m + ln(1/δ)) / m)`.
pub fn vc_bound(n_ambient: usize, m: usize, delta: f64, c: f64) -> Result<f64> {
    if m < 2 {
        return Err(Error::invalid("bound needs m >= 2"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid("delta must lie in (0, 1)"));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::invalid("bound constant must be positive"));
    }
    let m = m as f64;
    Ok(c * ((n_ambient as f64 * m.ln() + (1.0 / delta).ln()) / m).sqrt())
}

pub(crate) fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty());
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    }
}

/// `%g`-style formatting with `sig` significant digits.
pub(crate) fn format_sig(v: f64, sig: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if exp < -5 || exp >= sig as i32 {
        let s = format!("{:.*e}", sig - 1, v);
        let (mant, e) = s.split_once('e').expect("exponent");
        format!("{}e{}", trim_zeros(mant), e)
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
