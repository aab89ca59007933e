//! Command-line front end and file formats for `puiseux-core`.
//!
//! The binary is a thin wrapper over [`run`]; the JSON spec and build
//! formats live in [`format`] and figure data in [`plot`].

mod cli;
mod error;
pub mod format;
pub mod plot;

pub use cli::{run, CAP_ENV};
pub use error::{CliError, CliResult};
