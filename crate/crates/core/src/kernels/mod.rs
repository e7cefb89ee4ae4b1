//! Graph kernels: pull-based PageRank, its streaming-only variant, and
//! top-down BFS. All kernels are deterministic: outputs are bitwise
//! identical for every thread count.

mod bfs;
mod pagerank;

pub use bfs::bfs_top_down;
pub use pagerank::{pagerank, pagerank_streaming_only, StreamingOnlyRun};
pub(crate) use pagerank::{pagerank_on_view, streaming_only_on_view, AdjView};

use crate::error::{Error, Result};
use crate::instrument::PhaseTiming;
use crate::microbench::{fnv1_64_update, FNV1_OFFSET_BASIS};

/// How to treat zero-degree vertices, which have no defined contribution
/// (the contribution divides by degree).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroDegreePolicy {
    /// Error out; preprocessing is expected to have removed them.
    #[default]
    Strict,
    /// Contribute nothing. The score sum then falls below 1.
    Lenient,
}

/// Vertex-partitioning strategy for the parallel phases. Both strategies
/// produce bitwise-identical results; they differ only in load balance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Schedule {
    /// Contiguous equal-size vertex ranges.
    #[default]
    Static,
    /// Contiguous ranges balanced by cumulative degree.
    DegreeBalanced,
}

#[derive(Debug, Clone, Copy)]
pub struct PageRankConfig {
    pub damping: f64,
    pub iterations: usize,
    pub threads: usize,
    pub zero_degree: ZeroDegreePolicy,
    pub schedule: Schedule,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        Self {
            damping: 0.85,
            iterations: 20,
            threads: 1,
            zero_degree: ZeroDegreePolicy::default(),
            schedule: Schedule::default(),
        }
    }
}

impl PageRankConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(Error::InvalidInput(format!(
                "damping factor must be in (0,1), got {}",
                self.damping
            )));
        }
        if self.iterations == 0 {
            return Err(Error::InvalidInput("iterations must be >= 1".into()));
        }
        if self.threads == 0 {
            return Err(Error::InvalidInput("threads must be >= 1".into()));
        }
        Ok(())
    }
}

/// Output of one kernel run. The checksum is a pure function of `values`.
#[derive(Debug, Clone)]
pub struct KernelResult<T> {
    pub values: Vec<T>,
    pub checksum: u64,
    pub timing: PhaseTiming,
}

/// FNV-1 digest of the little-endian byte image of a score array.
pub fn checksum_scores(values: &[f64]) -> u64 {
    let mut h = FNV1_OFFSET_BASIS;
    for v in values {
        h = fnv1_64_update(h, &v.to_le_bytes());
    }
    h
}

/// FNV-1 digest of the little-endian byte image of a distance array.
pub fn checksum_distances(values: &[u32]) -> u64 {
    let mut h = FNV1_OFFSET_BASIS;
    for v in values {
        h = fnv1_64_update(h, &v.to_le_bytes());
    }
    h
}
