//! Support code for the `serre-lab` command-line tool.

pub mod checks;
