//! Configuration files, run records, output writers and the commands behind
//! the `vdwe` binary.

pub mod commands;
pub mod config;
pub mod output;
pub mod record;
pub mod snapshot;

pub use config::{Config, ConfigIssue};
