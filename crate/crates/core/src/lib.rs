//! channelbench-core: characterize the streaming versus random-access
//! behavior of sparse graph kernels, emulate narrower memory channels by
//! diluting adjacency arrays with dummy slots, and project the speedup of
//! many-narrow-channel memory systems from measured phase splits.
//!
//! Modules:
//!
//! - [`graph`]: edge-list and Matrix Market loading, preprocessing
//!   (symmetrize, dedup, singleton removal, id randomization), CSR
//!   construction, and a binary CSR container.
//! - [`kernels`]: deterministic pull-based PageRank, a streaming-only
//!   variant that skips the random reads, and top-down BFS.
//! - [`gap`]: gap insertion, the gapped PageRank, and the gap/thread sweep.
//! - [`instrument`]: phase timing and paired streaming/full measurement.
//! - [`cacheline`]: trace-driven cache-line fetch and utilization model.
//! - [`model`]: the narrow-channel speedup model and sweep projection.
//! - [`microbench`]: coalesced/random bandwidth benchmarks and FNV-1.

pub mod cacheline;
pub mod error;
pub mod gap;
pub mod graph;
pub mod instrument;
pub mod kernels;
pub mod microbench;
pub mod model;

pub use error::{Error, Result};
