//! command-line front end: file formats, subcommands and the verification suites

pub mod commands;
pub mod format;
pub mod io;
pub mod suites;
