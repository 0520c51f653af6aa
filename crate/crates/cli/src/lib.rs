//! File formats and subcommands behind the `shapecert` binary.

pub mod commands;
pub mod error;
pub mod format;
pub mod obj;

pub use error::CliError;
pub use format::ComplexDescription;
