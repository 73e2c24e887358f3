//! Command line driver for `qkz-core`: the worked example's fixtures,
//! report and Ψ file formats, and the `qkz` subcommands.

pub mod cli;
pub mod fixtures;
pub mod latex;
pub mod psi_io;
pub mod report;
pub mod sampling;
pub mod suite;
