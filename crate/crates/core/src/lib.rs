//! Polyspectral-mean features for time-series clustering.
//!
//! The crate turns time series into a fixed-length feature vector built from
//! spectral and bispectral means plus a few summary statistics, clusters the
//! vectors with k-means, PAM or CLARA, and scores the result with internal
//! validation indices or, for simulated data, against known labels.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod clustering;
pub mod error;
pub mod metrics;
pub mod pipeline;
pub mod polyspectra;
pub mod series;
pub mod simgen;
pub mod validation;

mod serde_num;

#[cfg(test)]
mod testutil;

// lets the example files, which name the crate, compile inside unit tests
#[cfg(test)]
extern crate self as polyclust;
#[cfg(test)]
mod example_runs;

pub use error::{Error, Result};
