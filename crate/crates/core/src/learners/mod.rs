//! Learners: the multimodal decoder and the unimodal baselines.

pub mod brute_force;
pub mod decode;
pub mod local_search;
pub mod perceptron;

pub use brute_force::{brute_force_erm, Budget};
pub use decode::{fit_thresholds, multimodal_decode, recover_directions, FINGERPRINT_NORM_TOL};
pub use local_search::{all_negative, local_search, local_search_unimodal, LocalSearchConfig, LocalSearchOutcome};
pub use perceptron::single_halfspace_baseline;

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LearnerKind {
    Decoder,
    BruteForce,
    LocalSearch,
    Perceptron,
}

impl LearnerKind {
    pub fn name(self) -> &'static str {
        match self {
            LearnerKind::Decoder => "decoder",
            LearnerKind::BruteForce => "bruteforce",
            LearnerKind::LocalSearch => "localsearch",
            LearnerKind::Perceptron => "perceptron",
        }
    }
}

impl fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LearnerKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "decoder" => Ok(LearnerKind::Decoder),
            "bruteforce" => Ok(LearnerKind::BruteForce),
            "localsearch" => Ok(LearnerKind::LocalSearch),
            "perceptron" => Ok(LearnerKind::Perceptron),
            other => Err(Error::invalid(format!("unknown learner '{other}'"))),
        }
    }
}
