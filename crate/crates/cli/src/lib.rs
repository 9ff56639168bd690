//! Command-line surface for `mertens-core`: argument and config handling,
//! table emitters and the verification suites.

mod commands;
pub mod config;
pub mod emit;
pub mod error;
pub mod reference;
pub mod suites;

pub use commands::run;
pub use config::{parse_count, OutputFormat, RunConfig};
pub use error::CliError;
