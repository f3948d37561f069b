//! Bimodal intersection-of-halfspaces benchmark.
//!
//! Builds planted instances whose second modality `y = Qx` hides the label
//! directions inside an orthogonal fingerprint matrix, learns them back with
//! a polynomial-time decoder that uses both modalities, and compares against
//! unimodal baselines that only see `x`.

pub mod cli;
pub mod error;
pub mod eval;
pub mod instance;
pub mod learners;
pub mod linalg;
pub mod rng;

pub use error::{Error, Result};
