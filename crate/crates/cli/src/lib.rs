//! Command-line front end for the `diracsplit` library.

pub mod commands;
pub mod config;
pub mod report;
