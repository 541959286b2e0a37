//! Command line front end for the matching simulator: argument surface,
//! subcommand implementations, and the batch experiment driver.

pub mod cli;
pub mod commands;
pub mod experiment;
