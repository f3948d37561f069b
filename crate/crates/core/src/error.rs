use thiserror::Error;

use crate::instance::Hypothesis;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("insufficient rank: achieved {achieved}, required {required}")]
    InsufficientRank { achieved: usize, required: usize },

    /// The decoder could not find enough linearly independent `x` rows.
    #[error("decode failure: x rows have rank {achieved}, need {required}")]
    DecodeFailure { achieved: usize, required: usize },

    /// The recovered matrix does not carry the fingerprint layout.
    #[error("corrupted fingerprint: extracted direction {index} has norm deviation {deviation:.3e}")]
    CorruptedFingerprint { index: usize, deviation: f64 },

    /// Brute-force enumeration ran out of budget; the best hypothesis seen so far is attached.
    #[error("budget exceeded after {evaluated} candidates (best risk so far {best_risk:.6})")]
    BudgetExceeded {
        best: Box<Hypothesis>,
        best_risk: f64,
        evaluated: u64,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }

    /// Short machine-readable status name used in reports.
    pub fn status(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::InsufficientRank { .. } => "insufficient-rank",
            Error::DecodeFailure { .. } => "decode-failure",
            Error::CorruptedFingerprint { .. } => "corrupted-fingerprint",
            Error::BudgetExceeded { .. } => "budget-exceeded",
            Error::Parse { .. } => "parse-error",
        }
    }
}
