//! Text formats, reports, benchmark harness and command-line interface on
//! top of [`lite_repair_core`].

pub mod bench;
pub mod cli;
pub mod report;
pub mod textio;

pub use lite_repair_core as core;
