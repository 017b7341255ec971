//! Command-line front end for graphkit and its construction benchmark.

pub mod bench;
mod commands;

pub use commands::{fmt_f64, read_graph, run, write_graph, write_partition, Cli, Command, Format};
