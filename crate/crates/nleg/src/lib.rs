//! Vacuum-theorem verification, reports and run configuration for
//! GL(n,R)-invariant n-leg field theories. Numerics live in `nleg-core`.

pub mod config;
pub mod error;
pub mod report;
pub mod suite;

pub use error::{SuiteError, SuiteResult};
pub use suite::{ResidualReport, Sampling};
