//! Library side of the `otw` command: single runs with reports, invariant
//! suites over seed ranges, and ratio benchmarks.

pub mod bench;
pub mod error;
pub mod report;
pub mod run;
pub mod seeds;
pub mod suites;

pub use error::{CliError, CliResult};
