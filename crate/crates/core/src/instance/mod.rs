//! Planted bimodal instances: concepts, fingerprint matrices, datasets and
//! their text formats.
//!
//! A proper instance lives in `ℝ³ⁿ`: labels come from two halfspaces whose
//! directions are supported on the first `n` coordinates, and the second
//! modality is `y = Qx` where the lower `2n x 2n` block of `Q` carries both
//! directions in its first column. The improper variant uses `√n − 1`
//! halfspaces supported on the first `√n` coordinates of `ℝⁿ`.

mod fingerprint;
mod generate;
mod io;

pub use fingerprint::{build_fingerprint, build_q_improper, build_q_proper};
pub use generate::{calibrate_thresholds, generate, generate_dataset, sample_x, CALIBRATION_DRAWS};
pub use io::{
    parse_dataset, parse_hypothesis, parse_witness, serialize_dataset, serialize_hypothesis, serialize_witness,
};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::unit_sphere_sample;
use crate::linalg::{dot, Matrix, UnitVector};
use crate::rng::{derive_seed, seeded};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Pos,
    Neg,
}

impl Label {
    pub fn as_i8(self) -> i8 {
        match self {
            Label::Pos => 1,
            Label::Neg => -1,
        }
    }

    pub fn flipped(self) -> Label {
        match self {
            Label::Pos => Label::Neg,
            Label::Neg => Label::Pos,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Pos => "+1",
            Label::Neg => "-1",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Proper,
    Improper,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Proper => "proper",
            Mode::Improper => "improper",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "proper" => Ok(Mode::Proper),
            "improper" => Ok(Mode::Improper),
            other => Err(Error::invalid(format!("unknown mode '{other}'"))),
        }
    }
}

/// Dimensions implied by a mode and base dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub mode: Mode,
    pub n: usize,
    /// Dimension of `x` and `y`.
    pub ambient: usize,
    /// Number of leading coordinates the labels depend on.
    pub label_dim: usize,
    /// Number of planted halfspaces.
    pub k: usize,
}

impl Layout {
    pub fn new(mode: Mode, n: usize) -> Result<Self> {
        match mode {
            Mode::Proper => {
                if n == 0 {
                    return Err(Error::invalid("n must be >= 1"));
                }
                Ok(Layout {
                    mode,
                    n,
                    ambient: 3 * n,
                    label_dim: n,
                    k: 2,
                })
            }
            Mode::Improper => {
                let s = integer_sqrt(n).ok_or_else(|| Error::invalid("n must be a perfect square"))?;
                if s < 2 {
                    return Err(Error::invalid("n must be a perfect square with sqrt(n) >= 2"));
                }
                Ok(Layout {
                    mode,
                    n,
                    ambient: n,
                    label_dim: s,
                    k: s - 1,
                })
            }
        }
    }
}

pub(crate) fn integer_sqrt(n: usize) -> Option<usize> {
    let mut s = (n as f64).sqrt() as usize;
    while s * s > n {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= n {
        s += 1;
    }
    (s * s == n).then_some(s)
}

/// `{x : rᵀx ≤ c}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace {
    pub direction: UnitVector,
    pub threshold: f64,
}

impl Halfspace {
    pub fn new(direction: UnitVector, threshold: f64) -> Self {
        Self { direction, threshold }
    }

    /// `c − rᵀx`; non-negative inside the (closed) halfspace.
    pub fn margin(&self, x: &[f64]) -> f64 {
        self.threshold - dot(&self.direction, x)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.margin(x) >= 0.0
    }
}

/// Intersection of `k ≥ 1` halfspaces; predicts `+1` on the intersection.
#[derive(Clone, Debug, PartialEq)]
pub struct Hypothesis {
    halfspaces: Vec<Halfspace>,
}

impl Hypothesis {
    pub fn new(halfspaces: Vec<Halfspace>) -> Result<Self> {
        let dim = halfspaces
            .first()
            .ok_or_else(|| Error::invalid("a hypothesis needs at least one halfspace"))?
            .direction
            .dim();
        if halfspaces.iter().any(|h| h.direction.dim() != dim) {
            return Err(Error::invalid("all halfspace directions must share one dimension"));
        }
        if halfspaces.iter().any(|h| !h.threshold.is_finite()) {
            return Err(Error::invalid("thresholds must be finite"));
        }
        Ok(Self { halfspaces })
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn k(&self) -> usize {
        self.halfspaces.len()
    }

    pub fn dim(&self) -> usize {
        self.halfspaces[0].direction.dim()
    }

    pub fn directions(&self) -> impl Iterator<Item = &UnitVector> {
        self.halfspaces.iter().map(|h| &h.direction)
    }

    pub fn thresholds(&self) -> Vec<f64> {
        self.halfspaces.iter().map(|h| h.threshold).collect()
    }

    /// `sgn(min_j (c_j − r_jᵀx))` with `sgn(0) = +1`.
    pub fn predict(&self, x: &[f64]) -> Result<Label> {
        if x.len() != self.dim() {
            return Err(Error::invalid(format!(
                "point has dimension {}, hypothesis has {}",
                x.len(),
                self.dim()
            )));
        }
        Ok(self.predict_unchecked(x))
    }

    pub(crate) fn predict_unchecked(&self, x: &[f64]) -> Label {
        if self.halfspaces.iter().all(|h| h.contains(x)) {
            Label::Pos
        } else {
            Label::Neg
        }
    }

    /// Number of points where the prediction differs from the label.
    pub(crate) fn mistakes<P: AsRef<[f64]>>(&self, xs: &[P], zs: &[Label]) -> usize {
        xs.iter()
            .zip(zs)
            .filter(|(x, z)| self.predict_unchecked(x.as_ref()) != **z)
            .count()
    }
}

/// Hidden concept plus sampling configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceParams {
    pub mode: Mode,
    pub n: usize,
    /// Planted directions in `ℝ^label_dim`.
    pub directions: Vec<UnitVector>,
    /// `None` means "calibrate from `positive_target` at generation time".
    pub thresholds: Option<Vec<f64>>,
    pub positive_target: f64,
    pub seed: u64,
}

impl InstanceParams {
    /// Draws planted directions uniformly on the sphere from `seed`.
    pub fn planted(mode: Mode, n: usize, positive_target: f64, seed: u64) -> Result<Self> {
        let layout = Layout::new(mode, n)?;
        let mut rng = seeded(derive_seed(seed, 0));
        let directions = (0..layout.k)
            .map(|_| unit_sphere_sample(&mut rng, layout.label_dim))
            .collect::<Result<Vec<_>>>()?;
        let params = Self {
            mode,
            n,
            directions,
            thresholds: None,
            positive_target,
            seed,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn layout(&self) -> Result<Layout> {
        Layout::new(self.mode, self.n)
    }

    pub fn validate(&self) -> Result<Layout> {
        let layout = self.layout()?;
        if self.directions.len() != layout.k {
            return Err(Error::invalid(format!(
                "{} mode with n = {} needs {} directions, got {}",
                self.mode,
                self.n,
                layout.k,
                self.directions.len()
            )));
        }
        if self.directions.iter().any(|d| d.dim() != layout.label_dim) {
            return Err(Error::invalid(format!(
                "directions must have dimension {}",
                layout.label_dim
            )));
        }
        if let Some(t) = &self.thresholds {
            if t.len() != layout.k || t.iter().any(|c| !c.is_finite()) {
                return Err(Error::invalid("need one finite threshold per direction"));
            }
        }
        if !(self.positive_target > 0.0 && self.positive_target < 1.0) {
            return Err(Error::invalid("positive target must lie in (0, 1)"));
        }
        Ok(layout)
    }

    /// The planted concept over the ambient space (directions zero-padded).
    pub fn planted_hypothesis(&self) -> Result<Hypothesis> {
        let layout = self.validate()?;
        let thresholds = self
            .thresholds
            .as_ref()
            .ok_or_else(|| Error::invalid("thresholds have not been calibrated"))?;
        padded_hypothesis(&self.directions, thresholds, layout.ambient)
    }
}

pub(crate) fn padded_hypothesis(directions: &[UnitVector], thresholds: &[f64], ambient: usize) -> Result<Hypothesis> {
    Hypothesis::new(
        directions
            .iter()
            .zip(thresholds)
            .map(|(r, &c)| Halfspace::new(r.padded(ambient), c))
            .collect(),
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Label,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub mode: Mode,
    pub n_base: usize,
    pub ambient_dim: usize,
    pub seed: u64,
    pub rows: Vec<Row>,
}

impl Dataset {
    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn xs(&self) -> Vec<&[f64]> {
        self.rows.iter().map(|r| r.x.as_slice()).collect()
    }

    pub fn ys(&self) -> Vec<&[f64]> {
        self.rows.iter().map(|r| r.y.as_slice()).collect()
    }

    pub fn zs(&self) -> Vec<Label> {
        self.rows.iter().map(|r| r.z).collect()
    }

    pub fn positive_fraction(&self) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        self.rows.iter().filter(|r| r.z == Label::Pos).count() as f64 / self.m() as f64
    }

    pub fn layout(&self) -> Result<Layout> {
        Layout::new(self.mode, self.n_base)
    }
}

/// The hidden side of a generated instance, kept for post-hoc checks.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub mode: Mode,
    pub n_base: usize,
    pub directions: Vec<UnitVector>,
    pub thresholds: Vec<f64>,
    pub q: Matrix,
}

impl Witness {
    pub fn layout(&self) -> Result<Layout> {
        Layout::new(self.mode, self.n_base)
    }

    pub fn planted_hypothesis(&self) -> Result<Hypothesis> {
        padded_hypothesis(&self.directions, &self.thresholds, self.layout()?.ambient)
    }

    /// Parameters that regenerate fresh draws from the same planted concept.
    pub fn params(&self, positive_target: f64, seed: u64) -> InstanceParams {
        InstanceParams {
            mode: self.mode,
            n: self.n_base,
            directions: self.directions.clone(),
            thresholds: Some(self.thresholds.clone()),
            positive_target,
            seed,
        }
    }
}
