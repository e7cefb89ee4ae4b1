//! Narrow-channel speedup model.
//!
//! Total kernel time decomposes into a random-access share `R/(R+S)` and a
//! streaming share `S/(R+S)`. Splitting the memory system into `C` times as
//! many channels, each proportionally narrower, is assumed to scale the
//! random share by `1/C` while the streaming share pays an overhead factor
//! `K` measured from gap emulation:
//!
//! ```text
//! speedup = 1 / ( (1/C) * r_frac + (K/C) * s_frac )
//! ```

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gap::SweepRow;

/// Assumptions baked into the projection; attached to every report.
pub const MODEL_CAVEATS: [&str; 3] = [
    "first-order model: computation and instruction-throughput costs are not represented",
    "streaming and random accesses are assumed not to overlap in time",
    "total bandwidth is held constant while the channel count scales by C",
];

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChannelModel {
    /// Random-access share of total time, `R/(R+S)`.
    pub r_frac: f64,
    /// Streaming share of total time, `S/(R+S)`.
    pub s_frac: f64,
    /// Streaming overhead factor under the narrower channels.
    pub k: f64,
    /// Channel-count multiplier.
    pub c: f64,
}

impl ChannelModel {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.r_frac) || !(0.0..=1.0).contains(&self.s_frac) {
            return Err(Error::InvalidInput(format!(
                "fractions must lie in [0,1]: r={}, s={}",
                self.r_frac, self.s_frac
            )));
        }
        if (self.r_frac + self.s_frac - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "fractions must sum to 1: r={} + s={} = {}",
                self.r_frac,
                self.s_frac,
                self.r_frac + self.s_frac
            )));
        }
        if self.k < 0.0 || !self.k.is_finite() {
            return Err(Error::InvalidInput(format!("k must be >= 0, got {}", self.k)));
        }
        if self.c <= 0.0 || !self.c.is_finite() {
            return Err(Error::InvalidInput(format!("c must be > 0, got {}", self.c)));
        }
        Ok(())
    }
}

/// Evaluates the model. Errors if the denominator degenerates (possible
/// only when the streaming share is total and k = 0).
pub fn speedup(m: &ChannelModel) -> Result<f64> {
    m.validate()?;
    let denom = m.r_frac / m.c + m.k * m.s_frac / m.c;
    if denom <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "degenerate model: denominator {denom}"
        )));
    }
    Ok(1.0 / denom)
}

/// How the streaming overhead factor is derived from measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KMode {
    /// Ratio of streaming fractions, gapped over baseline.
    #[default]
    Fraction,
    /// Ratio of absolute streaming times, gapped over baseline.
    Absolute,
}

/// Streaming overhead factor from a baseline and a gapped measurement.
/// Both modes are pure ratios, so they are invariant under rescaling the
/// pair by any positive constant.
pub fn fit_k(s_base: f64, s_gapped: f64, _mode: KMode) -> Result<f64> {
    if !(s_base > 0.0) || !s_base.is_finite() || !s_gapped.is_finite() || s_gapped < 0.0 {
        return Err(Error::InvalidInput(format!(
            "need finite measurements with base > 0, got base={s_base}, gapped={s_gapped}"
        )));
    }
    Ok(s_gapped / s_base)
}

/// One projected operating point.
#[derive(Debug, Clone, Serialize)]
pub struct ProjectionRow {
    pub threads: Option<usize>,
    pub r_frac: f64,
    pub s_frac: f64,
    pub k: f64,
    pub c: f64,
    pub speedup: f64,
    pub mode: KMode,
    pub caveats: Vec<&'static str>,
}

fn median(mut xs: Vec<u64>) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_unstable();
    let n = xs.len();
    Some(if n % 2 == 1 {
        xs[n / 2] as f64
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) as f64 / 2.0
    })
}

struct Point {
    streaming: f64,
    total: f64,
}

impl Point {
    fn s_frac(&self) -> f64 {
        (self.streaming / self.total).clamp(0.0, 1.0)
    }
}

fn median_point(rows: &[SweepRow], gap: usize, threads: usize) -> Option<Point> {
    let pick: Vec<&SweepRow> = rows
        .iter()
        .filter(|r| r.gap == gap && r.threads == threads)
        .collect();
    let streaming = median(pick.iter().map(|r| r.streaming_ns).collect())?;
    let total = median(pick.iter().map(|r| r.total_ns).collect())?;
    if total <= 0.0 {
        return None;
    }
    Some(Point { streaming, total })
}

/// Projects the speedup for every thread count present in a sweep.
///
/// For each thread count, the phase split is read from the rows measured at
/// `gap_for_width` (the emulated narrow-channel operating point) and the
/// streaming overhead `k` is fitted against the gap-0 baseline:
/// fraction mode divides the streaming fractions, absolute mode divides the
/// streaming times.
pub fn project(
    rows: &[SweepRow],
    gap_for_width: usize,
    c: f64,
    mode: KMode,
) -> Result<Vec<ProjectionRow>> {
    let mut thread_counts: Vec<usize> = rows.iter().map(|r| r.threads).collect();
    thread_counts.sort_unstable();
    thread_counts.dedup();
    if thread_counts.is_empty() {
        return Err(Error::InvalidInput("sweep is empty".into()));
    }

    let mut out = Vec::with_capacity(thread_counts.len());
    for threads in thread_counts {
        let base = median_point(rows, 0, threads).ok_or_else(|| {
            Error::InvalidInput(format!("no gap-0 baseline rows at threads={threads}"))
        })?;
        let gapped = median_point(rows, gap_for_width, threads).ok_or_else(|| {
            Error::InvalidInput(format!(
                "no gap-{gap_for_width} rows at threads={threads}"
            ))
        })?;

        let k = match mode {
            KMode::Fraction => fit_k(base.s_frac(), gapped.s_frac(), mode)?,
            KMode::Absolute => fit_k(base.streaming, gapped.streaming, mode)?,
        };
        let s_frac = gapped.s_frac();
        let m = ChannelModel {
            r_frac: 1.0 - s_frac,
            s_frac,
            k,
            c,
        };
        out.push(ProjectionRow {
            threads: Some(threads),
            r_frac: m.r_frac,
            s_frac: m.s_frac,
            k,
            c,
            speedup: speedup(&m)?,
            mode,
            caveats: MODEL_CAVEATS.to_vec(),
        });
    }
    Ok(out)
}
