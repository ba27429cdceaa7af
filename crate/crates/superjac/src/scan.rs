//! Range scans over `d`, split into contiguous chunks of `CHUNK_SIZE` moduli.
//!
//! Chunks run on a bounded rayon pool a round at a time; after each round
//! the contiguous completed prefix is merged and checkpointed. The result is
//! independent of the worker count.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use superjac_core::{certify_d, CertReport};

use crate::checkpoint::{Checkpoint, CheckpointError};

pub const CHUNK_SIZE: u64 = 1024;

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub d_lo: u64,
    pub d_hi: u64,
    pub n: u64,
    pub g: u64,
    pub workers: usize,
    pub checkpoint: Option<PathBuf>,
    /// Stop after this many chunks (counted from the resume point).
    pub chunk_budget: Option<u64>,
}

impl ScanConfig {
    pub fn new(d_lo: u64, d_hi: u64, n: u64, g: u64) -> Self {
        ScanConfig {
            d_lo,
            d_hi,
            n,
            g,
            workers: 1,
            checkpoint: None,
            chunk_budget: None,
        }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn checkpoint(mut self, path: impl Into<PathBuf>) -> Self {
        self.checkpoint = Some(path.into());
        self
    }

    pub fn chunk_budget(mut self, chunks: u64) -> Self {
        self.chunk_budget = Some(chunks);
        self
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ScanError {
    #[error("invalid scan range: need n < d_lo <= d_hi (n={n}, d_lo={d_lo}, d_hi={d_hi})")]
    InvalidRange { n: u64, d_lo: u64, d_hi: u64 },
    #[error("invalid scan parameters: {0}")]
    InvalidParameters(&'static str),
    #[error(transparent)]
    CheckpointCorrupt(#[from] CheckpointError),
    #[error("checkpoint was written for a different scan (n={n}, g={g}, range [{d_lo}, {d_hi}])")]
    CheckpointMismatch {
        n: u64,
        g: u64,
        d_lo: u64,
        d_hi: u64,
    },
    #[error("writing checkpoint: {0}")]
    CheckpointWrite(#[from] std::io::Error),
    #[error("building worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

/// Per-`d` wall time over the moduli certified in this run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingStats {
    pub certified: u64,
    pub total: Duration,
    pub mean: Duration,
    pub max: Duration,
    pub slowest_d: u64,
    pub wall: Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub n: u64,
    pub g: u64,
    pub d_lo: u64,
    pub d_hi: u64,
    /// Equals `d_hi` unless a chunk budget cut the scan short.
    pub completed_through: u64,
    pub bad_d: Vec<u64>,
    /// Violation count for each entry of `bad_d`.
    pub violation_counts: Vec<u64>,
    pub max_bad_d: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<TimingStats>,
}

impl ScanSummary {
    pub fn is_complete(&self) -> bool {
        self.completed_through == self.d_hi
    }

    pub fn without_timing(mut self) -> Self {
        self.timing = None;
        self
    }

    /// `(d, bad, violation_count)` for every completed `d`.
    pub fn rows(&self) -> impl Iterator<Item = (u64, bool, u64)> + '_ {
        let mut bad = self.bad_d.iter().zip(&self.violation_counts).peekable();
        (self.d_lo..=self.completed_through).map(move |d| match bad.peek() {
            Some(&(&b, &count)) if b == d => {
                bad.next();
                (d, true, count)
            }
            _ => (d, false, 0),
        })
    }
}

/// `certify_d` with the elapsed field filled in.
pub fn timed_certify(d: u64, n: u64, g: u64) -> CertReport {
    let start = Instant::now();
    let mut report = certify_d(d, n, g);
    report.elapsed = start.elapsed();
    report
}

struct ChunkResult {
    bad: Vec<(u64, u64)>,
    times: Vec<(u64, Duration)>,
}

fn run_chunk(lo: u64, hi: u64, n: u64, g: u64) -> ChunkResult {
    let mut bad = Vec::new();
    let mut times = Vec::with_capacity((hi - lo + 1) as usize);
    for d in lo..=hi {
        let report = timed_certify(d, n, g);
        if !report.is_good() {
            bad.push((d, report.violations.len() as u64));
        }
        times.push((d, report.elapsed));
    }
    ChunkResult { bad, times }
}

pub fn scan(config: &ScanConfig) -> Result<ScanSummary, ScanError> {
    let ScanConfig {
        d_lo, d_hi, n, g, ..
    } = *config;
    if n == 0 || n >= d_lo || d_lo > d_hi {
        return Err(ScanError::InvalidRange { n, d_lo, d_hi });
    }
    if g == 0 || config.workers == 0 {
        return Err(ScanError::InvalidParameters(
            "g and workers must be positive",
        ));
    }
    let started = Instant::now();

    let mut state = Checkpoint::fresh(n, g, d_lo, d_hi);
    if let Some(path) = &config.checkpoint {
        if let Some(saved) = Checkpoint::load(path)? {
            if (saved.n, saved.g, saved.d_lo, saved.d_hi) != (n, g, d_lo, d_hi) {
                return Err(ScanError::CheckpointMismatch {
                    n: saved.n,
                    g: saved.g,
                    d_lo: saved.d_lo,
                    d_hi: saved.d_hi,
                });
            }
            state = saved;
        }
    }
    // counts for moduli restored from the checkpoint
    let mut bad: Vec<(u64, u64)> = state
        .bad_d
        .iter()
        .map(|&d| (d, certify_d(d, n, g).violations.len() as u64))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()?;
    let mut chunks: Vec<(u64, u64)> = Vec::new();
    let mut lo = state.completed_through + 1;
    while lo <= d_hi {
        let hi = lo.saturating_add(CHUNK_SIZE - 1).min(d_hi);
        chunks.push((lo, hi));
        lo = hi + 1;
    }
    if let Some(budget) = config.chunk_budget {
        chunks.truncate(budget as usize);
    }

    let mut times: Vec<(u64, Duration)> = Vec::new();
    let round = config.workers * 2;
    for batch in chunks.chunks(round) {
        let results: Vec<ChunkResult> = pool.install(|| {
            batch
                .par_iter()
                .map(|&(lo, hi)| run_chunk(lo, hi, n, g))
                .collect()
        });
        for (result, &(_, hi)) in results.into_iter().zip(batch) {
            bad.extend(result.bad);
            times.extend(result.times);
            state.completed_through = hi;
        }
        state.bad_d = bad.iter().map(|&(d, _)| d).collect();
        if let Some(path) = &config.checkpoint {
            state.store(path)?;
        }
    }

    let timing = (!times.is_empty()).then(|| {
        let total: Duration = times.iter().map(|&(_, t)| t).sum();
        let &(slowest_d, max) = times
            .iter()
            .max_by_key(|&&(d, t)| (t, std::cmp::Reverse(d)))
            .unwrap();
        TimingStats {
            certified: times.len() as u64,
            total,
            mean: total / times.len() as u32,
            max,
            slowest_d,
            wall: started.elapsed(),
        }
    });

    Ok(ScanSummary {
        n,
        g,
        d_lo,
        d_hi,
        completed_through: state.completed_through,
        max_bad_d: bad.last().map(|&(d, _)| d),
        bad_d: bad.iter().map(|&(d, _)| d).collect(),
        violation_counts: bad.iter().map(|&(_, c)| c).collect(),
        timing,
    })
}
