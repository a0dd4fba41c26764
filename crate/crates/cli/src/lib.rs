//! Command-line front end for `varnorm-core`.
//!
//! Scenarios are JSON documents ([`config::ScenarioConfig`]) whose
//! functions, exponents and weights are written in a small expression
//! language ([`expr`]). Every command emits a JSON report with sorted keys;
//! criterion curves can additionally be exported as CSV.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod exec;
pub mod expr;
pub mod report;
pub mod suites;

pub use cli::run;
pub use error::CliError;
