//! Library side of the `ram` command: reports, subcommands and the catalog
//! validation runner.

pub mod catalog;
pub mod commands;
pub mod report;
