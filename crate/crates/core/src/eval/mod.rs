//! Benchmark generation, retrieval metrics and brute-force oracles.

pub mod generate;
pub mod metrics;
pub mod oracle;

pub use generate::{generate, GenSpec, Generated};
pub use metrics::{metrics, productivity, Metrics, Ratio};
