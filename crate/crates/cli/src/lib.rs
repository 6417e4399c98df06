//! Command-line front end for `ptcubic-core`: configuration, coefficient
//! cache handling, report rendering and the acceptance harness.

pub mod commands;
pub mod config;
pub mod error;
pub mod reference;
pub mod render;
pub mod source;
pub mod verify;

pub use commands::run;
pub use config::{Cli, Command, OutputFormat, RunConfig};
pub use error::CliError;

/// Version tag of every JSON document, e.g. `ptcubic.coeffs/v1`.
pub fn schema(kind: &str) -> String {
    format!("ptcubic.{kind}/v1")
}

pub(crate) fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(
    value: &T,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}
