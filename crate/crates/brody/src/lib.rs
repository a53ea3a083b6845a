//! Command-line front end, curve documents, output formats and the
//! acceptance suite for `brody-core`.

pub mod acceptance;
pub mod commands;
pub mod config;
pub mod corpus;
pub mod doc;
pub mod error;
pub mod record;

pub use error::{CliError, CliResult};
