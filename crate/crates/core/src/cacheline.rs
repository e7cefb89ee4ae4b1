//! Trace-driven cache-line accounting.
//!
//! Replays the exact address sequences of the kernels' streaming and random
//! phases against a line-granular memory model and counts fetched lines and
//! consumed bytes. The default model has no cache: it tracks only the last
//! resident line per access class, which captures spatial locality and
//! nothing else. An opt-in set-associative LRU simulation is available for
//! exploring reuse.
//!
//! Arrays are modeled as line-aligned at offset 0; the adjacency and value
//! arrays live in disjoint address regions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gap::{insert_gaps, GappedCsr};
use crate::graph::Csr;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CacheConfig {
    /// Cache-line size in bytes; power of two.
    pub line_bytes: usize,
    /// Access width in bytes; divides `line_bytes`.
    pub elem_bytes: usize,
    /// Total cache capacity for the LRU simulation; `None` disables it.
    pub capacity_bytes: Option<usize>,
    /// Ways per set for the LRU simulation; `None` means fully associative.
    pub associativity: Option<usize>,
}

impl Default for CacheConfig {
    fn default() -> Self {
        Self {
            line_bytes: 64,
            elem_bytes: 4,
            capacity_bytes: None,
            associativity: None,
        }
    }
}

impl CacheConfig {
    pub fn elems_per_line(&self) -> usize {
        self.line_bytes / self.elem_bytes
    }

    pub fn validate(&self) -> Result<()> {
        if !self.line_bytes.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "line_bytes {} is not a power of two",
                self.line_bytes
            )));
        }
        if self.elem_bytes == 0
            || self.elem_bytes > self.line_bytes
            || self.line_bytes % self.elem_bytes != 0
        {
            return Err(Error::InvalidInput(format!(
                "elem_bytes {} must divide line_bytes {}",
                self.elem_bytes, self.line_bytes
            )));
        }
        if self.elems_per_line() > 128 {
            return Err(Error::InvalidInput(
                "more than 128 elements per line is not supported".into(),
            ));
        }
        if let Some(cap) = self.capacity_bytes {
            let ways = self.associativity.unwrap_or(cap / self.line_bytes);
            if ways == 0 || cap == 0 || cap % (self.line_bytes * ways) != 0 {
                return Err(Error::InvalidInput(format!(
                    "capacity {cap} must be a positive multiple of line_bytes * ways"
                )));
            }
        } else if self.associativity.is_some() {
            return Err(Error::InvalidInput(
                "associativity given without capacity_bytes".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccessKind {
    Stream,
    Random,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TagCounts {
    pub stream: u64,
    pub random: u64,
}

impl TagCounts {
    fn bump(&mut self, kind: AccessKind) {
        match kind {
            AccessKind::Stream => self.stream += 1,
            AccessKind::Random => self.random += 1,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CacheLineStats {
    pub lines_fetched: u64,
    pub bytes_used: u64,
    pub bytes_fetched: u64,
    /// `bytes_used / bytes_fetched`; 0 when nothing was fetched.
    pub utilization: f64,
    pub accesses_by_tag: TagCounts,
    pub lines_by_tag: TagCounts,
}

// Disjoint model address regions for the two arrays.
const REGION_SHIFT: u32 = 56;
const STREAM_BASE: u64 = 0;
const RANDOM_BASE: u64 = 1 << REGION_SHIFT;

struct Resident {
    line: u64,
    used_mask: u128,
}

struct LruEntry {
    line: u64,
    used_mask: u128,
    stamp: u64,
}

enum ReplayModel {
    /// Last-line register per access class.
    Lookback {
        stream: Option<Resident>,
        random: Option<Resident>,
    },
    Lru {
        sets: Vec<Vec<LruEntry>>,
        ways: usize,
        tick: u64,
    },
}

/// Push-based trace replayer; feed accesses, then call [`Replayer::finish`].
pub struct Replayer {
    cfg: CacheConfig,
    model: ReplayModel,
    lines_fetched: u64,
    bytes_used: u64,
    accesses: TagCounts,
    lines: TagCounts,
}

impl Replayer {
    pub fn new(cfg: &CacheConfig) -> Result<Self> {
        cfg.validate()?;
        let model = match cfg.capacity_bytes {
            None => ReplayModel::Lookback {
                stream: None,
                random: None,
            },
            Some(cap) => {
                let total_lines = cap / cfg.line_bytes;
                let ways = cfg.associativity.unwrap_or(total_lines);
                let num_sets = total_lines / ways;
                ReplayModel::Lru {
                    sets: (0..num_sets).map(|_| Vec::with_capacity(ways)).collect(),
                    ways,
                    tick: 0,
                }
            }
        };
        Ok(Self {
            cfg: *cfg,
            model,
            lines_fetched: 0,
            bytes_used: 0,
            accesses: TagCounts::default(),
            lines: TagCounts::default(),
        })
    }

    pub fn access(&mut self, kind: AccessKind, elem: u64) {
        let base = match kind {
            AccessKind::Stream => STREAM_BASE,
            AccessKind::Random => RANDOM_BASE,
        };
        let addr = base + elem * self.cfg.elem_bytes as u64;
        let line = addr / self.cfg.line_bytes as u64;
        let bit = 1u128 << ((addr % self.cfg.line_bytes as u64) / self.cfg.elem_bytes as u64);
        self.accesses.bump(kind);

        match &mut self.model {
            ReplayModel::Lookback { stream, random } => {
                let slot = match kind {
                    AccessKind::Stream => stream,
                    AccessKind::Random => random,
                };
                match slot {
                    Some(r) if r.line == line => {
                        if r.used_mask & bit == 0 {
                            r.used_mask |= bit;
                            self.bytes_used += self.cfg.elem_bytes as u64;
                        }
                    }
                    _ => {
                        *slot = Some(Resident {
                            line,
                            used_mask: bit,
                        });
                        self.lines_fetched += 1;
                        self.lines.bump(kind);
                        self.bytes_used += self.cfg.elem_bytes as u64;
                    }
                }
            }
            ReplayModel::Lru { sets, ways, tick } => {
                *tick += 1;
                let num_sets = sets.len() as u64;
                let set = &mut sets[(line % num_sets) as usize];
                if let Some(e) = set.iter_mut().find(|e| e.line == line) {
                    e.stamp = *tick;
                    if e.used_mask & bit == 0 {
                        e.used_mask |= bit;
                        self.bytes_used += self.cfg.elem_bytes as u64;
                    }
                    return;
                }
                // Miss: fetch, evicting the least recently used way if full.
                self.lines_fetched += 1;
                self.lines.bump(kind);
                self.bytes_used += self.cfg.elem_bytes as u64;
                let entry = LruEntry {
                    line,
                    used_mask: bit,
                    stamp: *tick,
                };
                if set.len() < *ways {
                    set.push(entry);
                } else {
                    let victim = set
                        .iter_mut()
                        .min_by_key(|e| e.stamp)
                        .expect("non-empty set");
                    *victim = entry;
                }
            }
        }
    }

    pub fn finish(self) -> CacheLineStats {
        let bytes_fetched = self.lines_fetched * self.cfg.line_bytes as u64;
        CacheLineStats {
            lines_fetched: self.lines_fetched,
            bytes_used: self.bytes_used,
            bytes_fetched,
            utilization: if bytes_fetched == 0 {
                0.0
            } else {
                self.bytes_used as f64 / bytes_fetched as f64
            },
            accesses_by_tag: self.accesses,
            lines_by_tag: self.lines,
        }
    }
}

/// Source of kernel address sequences for replay.
pub trait TraceSource {
    /// Calls `f(slot_position, neighbor_id)` for every real adjacency slot,
    /// in the order the streaming phase visits them.
    fn visit_slots(&self, f: &mut dyn FnMut(u64, u32));
}

impl TraceSource for Csr {
    fn visit_slots(&self, f: &mut dyn FnMut(u64, u32)) {
        for (i, &u) in self.adjacency.iter().enumerate() {
            f(i as u64, u);
        }
    }
}

impl TraceSource for GappedCsr {
    fn visit_slots(&self, f: &mut dyn FnMut(u64, u32)) {
        let stride = self.stride() as u64;
        for i in 0..self.base_ne {
            let pos = i * stride;
            f(pos, self.adjacency[pos as usize]);
        }
    }
}

/// Replays only the adjacency traversal (the streaming phase).
pub fn trace_streaming<T: TraceSource + ?Sized>(
    g: &T,
    cfg: &CacheConfig,
) -> Result<CacheLineStats> {
    let mut r = Replayer::new(cfg)?;
    g.visit_slots(&mut |pos, _| r.access(AccessKind::Stream, pos));
    Ok(r.finish())
}

/// Replays the full pull inner loop: each streamed adjacency slot followed
/// by the random read of the streamed neighbor's value.
pub fn trace_pull<T: TraceSource + ?Sized>(g: &T, cfg: &CacheConfig) -> Result<CacheLineStats> {
    let mut r = Replayer::new(cfg)?;
    g.visit_slots(&mut |pos, u| {
        r.access(AccessKind::Stream, pos);
        r.access(AccessKind::Random, u as u64);
    });
    Ok(r.finish())
}

/// Replays an arbitrary random-access sequence over a value array of
/// `n_elems` elements.
pub fn trace_random(accesses: &[u64], n_elems: u64, cfg: &CacheConfig) -> Result<CacheLineStats> {
    let mut r = Replayer::new(cfg)?;
    for &idx in accesses {
        if idx >= n_elems {
            return Err(Error::InvalidInput(format!(
                "access index {idx} out of bounds ({n_elems} elements)"
            )));
        }
        r.access(AccessKind::Random, idx);
    }
    Ok(r.finish())
}

/// Streaming trace of a synthetic contiguous array of `n_elems` real
/// entries diluted with `gap` dummies per entry.
pub fn trace_streaming_synthetic(
    n_elems: u64,
    gap: usize,
    cfg: &CacheConfig,
) -> Result<CacheLineStats> {
    let stride = gap as u64 + 1;
    let mut r = Replayer::new(cfg)?;
    for i in 0..n_elems {
        r.access(AccessKind::Stream, i * stride);
    }
    Ok(r.finish())
}

/// Ratio of streaming lines fetched at `gap` versus the ungapped layout of
/// the same graph. Approaches `min(gap+1, line/elem)` and saturates once
/// the stride reaches a full line.
pub fn fetch_ratio(g: &Csr, gap: usize, cfg: &CacheConfig) -> Result<f64> {
    let base = trace_streaming(g, cfg)?;
    let gapped = trace_streaming(&insert_gaps(g, gap)?, cfg)?;
    Ok(gapped.lines_fetched as f64 / base.lines_fetched as f64)
}

/// [`fetch_ratio`] on the synthetic contiguous array, where the relation
/// `ratio = min(gap+1, line/elem)` is exact for element counts that are a
/// multiple of the line width.
pub fn synthetic_fetch_ratio(n_elems: u64, gap: usize, cfg: &CacheConfig) -> Result<f64> {
    let base = trace_streaming_synthetic(n_elems, 0, cfg)?;
    let gapped = trace_streaming_synthetic(n_elems, gap, cfg)?;
    Ok(gapped.lines_fetched as f64 / base.lines_fetched as f64)
}
