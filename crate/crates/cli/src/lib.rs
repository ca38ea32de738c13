//! Front end for the `eofbound` library: state-file ingestion, monotone and
//! bound reports, cached surface builds, plot-data export and the
//! verification suite.

pub mod app;
pub mod commands;
pub mod error;
pub mod figures;
pub mod state_file;
pub mod surface_file;
pub mod verify;

pub use app::{run, Cli, Command};
pub use error::{CliError, CliResult};
