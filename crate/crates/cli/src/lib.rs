//! Library side of the `qes` binary, split out so the commands can be
//! driven from tests.

pub mod commands;
pub mod config;
pub mod doc;
pub mod render;

pub use commands::{cmd_spectrum, cmd_tables, run};
pub use config::{Cli, Command, Couplings, Format, RunConfig};
pub use doc::{Document, ErrorDoc};
