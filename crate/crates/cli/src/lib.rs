//! JSON file formats and the `locregen` command-line front end.

pub mod cli;
pub mod commands;
pub mod error;
pub mod format;
pub mod spec;

pub use cli::{run, Cli, Run};
pub use error::{CliError, Result};
pub use spec::{AnyCode, CodeSpec};
