//! Command line front end: argument dispatch, table generation and
//! classification sweeps.

pub mod commands;
pub mod sweep;
pub mod tables;
