//! Phase timing and the streaming/random decomposition.
//!
//! A full kernel run cannot observe its own phase split without perturbing
//! the inner loop, so the streaming component is measured by a separate
//! streaming-only variant of the kernel and paired with the full run.

use std::cell::Cell;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gap::GappedCsr;
use crate::kernels::PageRankConfig;

/// Measured durations for one kernel configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PhaseTiming {
    pub streaming_ns: u64,
    pub total_ns: u64,
    pub threads: usize,
    pub gap: usize,
    pub iterations: usize,
}

/// Splits a timing into (streaming, random) fractions of total time.
/// The two always sum to exactly 1.
pub fn phase_fractions(t: &PhaseTiming) -> Result<(f64, f64)> {
    if t.total_ns == 0 {
        return Err(Error::InvalidInput("total_ns is zero".into()));
    }
    let s = (t.streaming_ns.min(t.total_ns)) as f64 / t.total_ns as f64;
    Ok((s, 1.0 - s))
}

/// Monotonic time source, injectable so measurement plumbing is testable.
pub trait Clock {
    fn now_ns(&self) -> u64;
}

/// Wall-clock source backed by [`Instant`].
pub struct MonotonicClock(Instant);

impl MonotonicClock {
    pub fn new() -> Self {
        Self(Instant::now())
    }
}

impl Default for MonotonicClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for MonotonicClock {
    fn now_ns(&self) -> u64 {
        self.0.elapsed().as_nanos() as u64
    }
}

/// Test clock that replays a scripted sequence of timestamps.
pub struct ScriptedClock {
    stamps: Vec<u64>,
    next: Cell<usize>,
}

impl ScriptedClock {
    pub fn new(stamps: Vec<u64>) -> Self {
        Self {
            stamps,
            next: Cell::new(0),
        }
    }
}

impl Clock for ScriptedClock {
    fn now_ns(&self) -> u64 {
        let i = self.next.get();
        assert!(i < self.stamps.len(), "scripted clock exhausted");
        self.next.set(i + 1);
        self.stamps[i]
    }
}

pub const DEFAULT_REPEATS: usize = 5;

/// One paired streaming/full measurement, with raw repeats retained.
#[derive(Debug, Clone, Serialize)]
pub struct Measured {
    /// Medians over the repeats; streaming clamped to total.
    pub timing: PhaseTiming,
    pub raw_streaming_ns: Vec<u64>,
    pub raw_total_ns: Vec<u64>,
    pub mean_streaming_ns: f64,
    pub mean_total_ns: f64,
    pub full_checksum: u64,
    pub streaming_checksum: u64,
}

fn median(xs: &[u64]) -> u64 {
    let mut v = xs.to_vec();
    v.sort_unstable();
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2
    }
}

fn mean(xs: &[u64]) -> f64 {
    xs.iter().map(|&x| x as f64).sum::<f64>() / xs.len() as f64
}

/// Times `repeats` paired runs of the streaming-only and full kernels on the
/// same graph and configuration. Streaming time is taken from the separate
/// streaming-only variant rather than from intra-loop timers. Medians are
/// reported with means alongside; if the streaming median exceeds the full
/// median (timer noise), it is clamped to the total and the raw values are
/// kept.
pub fn measure_kernel(
    gg: &GappedCsr,
    cfg: &PageRankConfig,
    repeats: usize,
    clock: &dyn Clock,
) -> Result<Measured> {
    if repeats == 0 {
        return Err(Error::InvalidInput("repeats must be >= 1".into()));
    }
    let mut raw_streaming = Vec::with_capacity(repeats);
    let mut raw_total = Vec::with_capacity(repeats);
    let mut full_checksum = 0u64;
    let mut streaming_checksum = 0u64;

    for _ in 0..repeats {
        let t0 = clock.now_ns();
        let streaming = crate::gap::pagerank_streaming_only_gapped(gg, cfg)?;
        let t1 = clock.now_ns();
        raw_streaming.push(t1.saturating_sub(t0));
        streaming_checksum = streaming.run.checksum;

        let t0 = clock.now_ns();
        let full = crate::gap::pagerank_gapped(gg, cfg)?;
        let t1 = clock.now_ns();
        raw_total.push(t1.saturating_sub(t0));
        full_checksum = full.checksum;
    }

    let total_ns = median(&raw_total);
    let streaming_ns = median(&raw_streaming).min(total_ns);

    Ok(Measured {
        timing: PhaseTiming {
            streaming_ns,
            total_ns,
            threads: cfg.threads,
            gap: gg.gap,
            iterations: cfg.iterations,
        },
        mean_streaming_ns: mean(&raw_streaming),
        mean_total_ns: mean(&raw_total),
        raw_streaming_ns: raw_streaming,
        raw_total_ns: raw_total,
        full_checksum,
        streaming_checksum,
    })
}
