//! Command-line front end for `bellmatch`: run records, matching, scans and
//! identity checks.
//!
//! Exit codes: 0 success, 1 an inequality failed on real lists (a defect),
//! 2 invalid input or arguments, 3 I/O or file-format error.

pub mod args;
pub mod commands;
pub mod csv;
pub mod error;
pub mod record;

pub use args::Cli;
pub use commands::run;
pub use error::CliError;
