//! Std companion to `superjac-core`: parallel range scans with resumable
//! checkpoints, machine-readable reports, and the `superjac` command line.

pub mod checkpoint;
pub mod cli;
pub mod report;
pub mod scan;

pub use superjac_core as core;

pub use checkpoint::Checkpoint;
pub use scan::{scan, timed_certify, ScanConfig, ScanError, ScanSummary, TimingStats, CHUNK_SIZE};
