//! File formats, commands and the validation suite behind the `ogd` binary.
//!
//! The numerical work lives in `ogd-core`; this crate adds TOML state
//! files, CSV and JSON output, parallel sweeps and the acceptance checks.

pub mod cli;
pub mod compute;
pub mod error;
pub mod format;
pub mod protocol;
pub mod spec;
pub mod sweep;
pub mod validate;

pub use error::{CliError, Result};
