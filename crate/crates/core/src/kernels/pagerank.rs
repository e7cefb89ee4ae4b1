use std::cell::UnsafeCell;
use std::sync::Barrier;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::graph::Csr;
use crate::instrument::PhaseTiming;
use crate::kernels::{
    checksum_scores, KernelResult, PageRankConfig, Schedule, ZeroDegreePolicy,
};
use crate::microbench::fnv1_64_update;

/// Adjacency slices with an element stride, so the same engine runs plain
/// CSR (stride 1) and gap-diluted CSR (stride g+1) with identical numerics.
pub(crate) struct AdjView<'a> {
    pub nv: usize,
    pub offsets: &'a [u64],
    pub adjacency: &'a [u32],
    pub stride: usize,
}

impl AdjView<'_> {
    #[inline]
    fn degree(&self, v: usize) -> usize {
        (self.offsets[v + 1] - self.offsets[v]) as usize / self.stride
    }
}

impl<'a> From<&'a Csr> for AdjView<'a> {
    fn from(g: &'a Csr) -> Self {
        AdjView {
            nv: g.num_vertices(),
            offsets: &g.offsets,
            adjacency: &g.adjacency,
            stride: 1,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum PullMode {
    Full,
    /// Traverse adjacency but skip the random contribution reads; streamed
    /// neighbor ids are folded into a per-worker sink instead.
    StreamingOnly,
}

/// Slice shared across workers. Phase barriers guarantee that no element is
/// written by one thread while read or written by another; the type only
/// bypasses the borrow checker, not the memory model.
struct SharedSlice<'a, T> {
    cells: &'a [UnsafeCell<T>],
}

// SAFETY: access discipline is enforced by the phase barriers; see the
// type-level comment.
unsafe impl<T: Send + Sync> Sync for SharedSlice<'_, T> {}
unsafe impl<T: Send + Sync> Send for SharedSlice<'_, T> {}

impl<T> Clone for SharedSlice<'_, T> {
    fn clone(&self) -> Self {
        *self
    }
}
impl<T> Copy for SharedSlice<'_, T> {}

impl<'a, T: Copy> SharedSlice<'a, T> {
    fn new(slice: &'a mut [T]) -> Self {
        // SAFETY: UnsafeCell<T> has the same layout as T.
        let cells = unsafe { &*(slice as *mut [T] as *const [UnsafeCell<T>]) };
        Self { cells }
    }

    /// SAFETY: caller must guarantee no concurrent write to index `i`.
    #[inline]
    unsafe fn get(&self, i: usize) -> T {
        *self.cells[i].get()
    }

    /// SAFETY: caller must guarantee exclusive access to index `i`.
    #[inline]
    unsafe fn set(&self, i: usize, v: T) {
        *self.cells[i].get() = v;
    }
}

fn static_ranges(nv: usize, threads: usize) -> Vec<std::ops::Range<usize>> {
    let chunk = nv.div_ceil(threads);
    (0..threads)
        .map(|w| {
            let start = (w * chunk).min(nv);
            let end = ((w + 1) * chunk).min(nv);
            start..end
        })
        .collect()
}

fn degree_balanced_ranges(offsets: &[u64], threads: usize) -> Vec<std::ops::Range<usize>> {
    let nv = offsets.len() - 1;
    let total = offsets[nv];
    let mut bounds = vec![0usize; threads + 1];
    bounds[threads] = nv;
    for w in 1..threads {
        let target = (total as u128 * w as u128 / threads as u128) as u64;
        let b = offsets.partition_point(|&o| o < target);
        bounds[w] = b.clamp(bounds[w - 1], nv);
    }
    (0..threads).map(|w| bounds[w]..bounds[w + 1]).collect()
}

pub(crate) struct EngineOutput {
    pub scores: Vec<f64>,
    pub streamed_id_sum: u64,
    pub elapsed_ns: u64,
}

/// Runs the three-phase pull iteration:
///
/// 1. per vertex: contribution = previous score / degree, accumulator = 0
///    (one division per vertex, not per edge);
/// 2. per vertex: accumulate neighbor contributions in ascending adjacency
///    order (the streaming traversal; the contribution reads are the random
///    accesses);
/// 3. per vertex: score = (1-d)/nv + d * accumulator, publish as previous.
///
/// Each worker owns a contiguous vertex range and is the sole writer of its
/// entries; barriers separate the phases. Accumulation order within a vertex
/// is fixed by adjacency order, so results are bitwise identical for every
/// thread count and schedule.
pub(crate) fn run_pull_engine(
    view: &AdjView,
    cfg: &PageRankConfig,
    mode: PullMode,
) -> Result<EngineOutput> {
    cfg.validate()?;
    let nv = view.nv;
    if nv == 0 {
        return Err(Error::EmptyGraph);
    }
    if cfg.zero_degree == ZeroDegreePolicy::Strict {
        if let Some(v) = (0..nv).find(|&v| view.degree(v) == 0) {
            return Err(Error::InvalidInput(format!(
                "vertex {v} has degree 0 (strict mode; preprocess with singleton removal)"
            )));
        }
    }

    let threads = cfg.threads;
    let ranges = match cfg.schedule {
        Schedule::Static => static_ranges(nv, threads),
        Schedule::DegreeBalanced => degree_balanced_ranges(view.offsets, threads),
    };

    let damping = cfg.damping;
    let base = (1.0 - damping) / nv as f64;
    let init = 1.0 / nv as f64;

    let mut prev = vec![init; nv];
    let mut curr = vec![0.0f64; nv];
    let mut contrib = vec![0.0f64; nv];

    let barrier = Barrier::new(threads);
    let start = Instant::now();

    let prev_s = SharedSlice::new(&mut prev);
    let curr_s = SharedSlice::new(&mut curr);
    let contrib_s = SharedSlice::new(&mut contrib);

    let streamed_id_sum = std::thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .iter()
            .map(|range| {
                let range = range.clone();
                let barrier = &barrier;
                scope.spawn(move || -> u64 {
                    let mut sink = 0u64;
                    for _ in 0..cfg.iterations {
                        // Phase 1: contributions, own range only.
                        for v in range.clone() {
                            let deg = view.degree(v);
                            // SAFETY: this worker is the only one touching
                            // index v in this phase.
                            unsafe {
                                let c = if deg == 0 {
                                    0.0
                                } else {
                                    prev_s.get(v) / deg as f64
                                };
                                contrib_s.set(v, c);
                                curr_s.set(v, 0.0);
                            }
                        }
                        barrier.wait();

                        // Phase 2: pull. contrib is read-only now (completed
                        // before the barrier); each worker writes only its
                        // own curr entries.
                        for v in range.clone() {
                            let s = view.offsets[v] as usize;
                            let e = view.offsets[v + 1] as usize;
                            let slots = &view.adjacency[s..e];
                            match mode {
                                PullMode::Full => {
                                    let mut acc = 0.0f64;
                                    for &u in slots.iter().step_by(view.stride) {
                                        // SAFETY: contrib has no writers in
                                        // this phase.
                                        acc += unsafe { contrib_s.get(u as usize) };
                                    }
                                    // SAFETY: sole writer of index v.
                                    unsafe { curr_s.set(v, acc) };
                                }
                                PullMode::StreamingOnly => {
                                    for &u in slots.iter().step_by(view.stride) {
                                        sink = sink.wrapping_add(u as u64);
                                    }
                                }
                            }
                        }
                        barrier.wait();

                        // Phase 3: damping and publish, own range only.
                        for v in range.clone() {
                            // SAFETY: sole reader/writer of index v here.
                            unsafe {
                                let x = base + damping * curr_s.get(v);
                                curr_s.set(v, x);
                                prev_s.set(v, x);
                            }
                        }
                        barrier.wait();
                    }
                    sink
                })
            })
            .collect();

        handles
            .into_iter()
            .map(|h| h.join().expect("kernel worker panicked"))
            .fold(0u64, u64::wrapping_add)
    });

    let elapsed_ns = start.elapsed().as_nanos() as u64;
    drop(contrib);
    Ok(EngineOutput {
        scores: curr,
        streamed_id_sum,
        elapsed_ns,
    })
}

fn timing_of(elapsed_ns: u64, streaming_ns: u64, cfg: &PageRankConfig, gap: usize) -> PhaseTiming {
    PhaseTiming {
        streaming_ns,
        total_ns: elapsed_ns,
        threads: cfg.threads,
        gap,
        iterations: cfg.iterations,
    }
}

pub(crate) fn pagerank_on_view(
    view: &AdjView,
    cfg: &PageRankConfig,
    gap: usize,
) -> Result<KernelResult<f64>> {
    let out = run_pull_engine(view, cfg, PullMode::Full)?;
    Ok(KernelResult {
        checksum: checksum_scores(&out.scores),
        timing: timing_of(out.elapsed_ns, 0, cfg, gap),
        values: out.scores,
    })
}

pub(crate) fn streaming_only_on_view(
    view: &AdjView,
    cfg: &PageRankConfig,
    gap: usize,
) -> Result<StreamingOnlyRun> {
    let out = run_pull_engine(view, cfg, PullMode::StreamingOnly)?;
    // Fold the sink into the checksum so the traversal cannot be elided.
    let checksum = fnv1_64_update(
        checksum_scores(&out.scores),
        &out.streamed_id_sum.to_le_bytes(),
    );
    Ok(StreamingOnlyRun {
        run: KernelResult {
            checksum,
            timing: timing_of(out.elapsed_ns, out.elapsed_ns, cfg, gap),
            values: out.scores,
        },
        streamed_id_sum: out.streamed_id_sum,
    })
}

/// Pull-based PageRank for a fixed iteration count.
pub fn pagerank(g: &Csr, cfg: &PageRankConfig) -> Result<KernelResult<f64>> {
    pagerank_on_view(&AdjView::from(g), cfg, 0)
}

/// Result of the streaming-only kernel variant.
#[derive(Debug, Clone)]
pub struct StreamingOnlyRun {
    pub run: KernelResult<f64>,
    /// Wrapping sum of every streamed neighbor id, over all iterations.
    pub streamed_id_sum: u64,
}

/// PageRank control flow with the random contribution reads removed: the
/// inner loop streams neighbor ids into a wrapping per-worker sink. The
/// per-vertex division and damping phases still run, so the elapsed time is
/// the full computation minus the random accesses.
pub fn pagerank_streaming_only(g: &Csr, cfg: &PageRankConfig) -> Result<StreamingOnlyRun> {
    streaming_only_on_view(&AdjView::from(g), cfg, 0)
}
