//! Operation counters, optional per-vertex / per-entry traces, and the
//! reports built from them.
//!
//! Workers accumulate scalar counts in a local [`Tally`] and flush it once
//! per chunk, so the shared counters see one atomic add per chunk rather
//! than one per operation. Trace arrays are only allocated when requested.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::atomic::{AtomicU32, AtomicU64, Ordering::Relaxed};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::engine::CoreResult;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Metrics {
    /// l1 for peel engines, l2 for h-index engines.
    pub iterations: u64,
    /// Every fetch-add, fetch-sub and clamped decrement.
    pub atomic_rmw: u64,
    /// Neighbour-list entries read, setup included.
    pub adjacency_reads: u64,
    /// Part of `adjacency_reads` spent before the first iteration
    /// (histogram construction).
    pub setup_adjacency_reads: u64,
    /// Barrier-separated frontier drains, including intra-level re-drains.
    pub drain_cycles: u64,
    /// Number of iteration-boundary invariant sweeps performed.
    pub invariant_checks: u64,
    pub elapsed: Duration,
    pub trace: Option<TraceCounts>,
}

impl Metrics {
    pub fn post_setup_reads(&self) -> u64 {
        self.adjacency_reads - self.setup_adjacency_reads
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TraceCounts {
    /// Per vertex: how many supersteps examined it.
    pub activations: Vec<u32>,
    /// Per directed adjacency entry: reads after setup.
    pub edge_accesses: Vec<u32>,
    /// Per vertex: atomic operations that targeted a cell it owns.
    pub cell_rmw: Vec<u32>,
}

pub struct Trace {
    activations: Vec<AtomicU32>,
    edge_accesses: Vec<AtomicU32>,
    cell_rmw: Vec<AtomicU32>,
}

fn zeroed(len: usize) -> Vec<AtomicU32> {
    (0..len).map(|_| AtomicU32::new(0)).collect()
}

fn snapshot(cells: Vec<AtomicU32>) -> Vec<u32> {
    cells.into_iter().map(AtomicU32::into_inner).collect()
}

/// Shared sink for one engine run.
pub struct Recorder {
    atomic_rmw: AtomicU64,
    adjacency_reads: AtomicU64,
    setup_reads: u64,
    drain_cycles: AtomicU64,
    invariant_checks: AtomicU64,
    trace: Option<Trace>,
}

impl Recorder {
    pub fn new(g: &Graph, trace: bool) -> Self {
        Recorder {
            atomic_rmw: AtomicU64::new(0),
            adjacency_reads: AtomicU64::new(0),
            setup_reads: 0,
            drain_cycles: AtomicU64::new(0),
            invariant_checks: AtomicU64::new(0),
            trace: trace.then(|| Trace {
                activations: zeroed(g.n()),
                edge_accesses: zeroed(g.adjacency().len()),
                cell_rmw: zeroed(g.n()),
            }),
        }
    }

    pub fn tally(&self) -> Tally<'_> {
        Tally {
            rmw: 0,
            reads: 0,
            trace: self.trace.as_ref(),
        }
    }

    pub fn absorb(&self, t: Tally<'_>) {
        if t.rmw > 0 {
            self.atomic_rmw.fetch_add(t.rmw, Relaxed);
        }
        if t.reads > 0 {
            self.adjacency_reads.fetch_add(t.reads, Relaxed);
        }
    }

    /// Setup reads are counted but kept out of the edge trace.
    pub fn add_setup_reads(&mut self, reads: u64) {
        self.setup_reads += reads;
        self.adjacency_reads.fetch_add(reads, Relaxed);
    }

    pub fn drain_cycle(&self) {
        self.drain_cycles.fetch_add(1, Relaxed);
    }

    pub fn invariant_check(&self) {
        self.invariant_checks.fetch_add(1, Relaxed);
    }

    pub fn finish(self, iterations: u64, elapsed: Duration) -> Metrics {
        Metrics {
            iterations,
            atomic_rmw: self.atomic_rmw.into_inner(),
            adjacency_reads: self.adjacency_reads.into_inner(),
            setup_adjacency_reads: self.setup_reads,
            drain_cycles: self.drain_cycles.into_inner(),
            invariant_checks: self.invariant_checks.into_inner(),
            elapsed,
            trace: self.trace.map(|t| TraceCounts {
                activations: snapshot(t.activations),
                edge_accesses: snapshot(t.edge_accesses),
                cell_rmw: snapshot(t.cell_rmw),
            }),
        }
    }
}

/// Worker-local counters, flushed into a [`Recorder`] with `absorb`.
pub struct Tally<'a> {
    pub rmw: u64,
    pub reads: u64,
    trace: Option<&'a Trace>,
}

impl Tally<'_> {
    /// Returns `v`'s neighbour list and records the read of every entry.
    #[inline]
    pub fn neighbors<'g>(&mut self, g: &'g Graph, v: VertexId) -> &'g [VertexId] {
        let range = g.edge_range(v);
        self.reads += range.len() as u64;
        if let Some(t) = self.trace {
            for e in &t.edge_accesses[range.clone()] {
                e.fetch_add(1, Relaxed);
            }
        }
        &g.adjacency()[range]
    }

    /// One atomic read-modify-write on a cell owned by `owner`.
    #[inline]
    pub fn rmw(&mut self, owner: VertexId) {
        self.rmw += 1;
        if let Some(t) = self.trace {
            t.cell_rmw[owner as usize].fetch_add(1, Relaxed);
        }
    }

    #[inline]
    pub fn activate(&mut self, v: VertexId) {
        if let Some(t) = self.trace {
            t.activations[v as usize].fetch_add(1, Relaxed);
        }
    }
}

/// Vertices by activation count, over vertices activated at least once.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActivationReport {
    pub activated: u64,
    /// Counts for the buckets `1`, `2`, `3-5`, `>5`.
    pub counts: [u64; 4],
    pub fractions: [f64; 4],
}

impl ActivationReport {
    pub const BUCKETS: [&'static str; 4] = ["1", "2", "3-5", ">5"];
}

/// Directed adjacency entries by access count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeAccessReport {
    pub entries: u64,
    /// Counts for the buckets `0`, `1`, `2`, `3-5`, `>5`.
    pub counts: [u64; 5],
    pub fractions: [f64; 5],
    pub adjacency_reads: u64,
    pub setup_adjacency_reads: u64,
}

impl EdgeAccessReport {
    pub const BUCKETS: [&'static str; 5] = ["0", "1", "2", "3-5", ">5"];
}

fn fractions<const N: usize>(counts: [u64; N], total: u64) -> [f64; N] {
    counts.map(|c| {
        if total == 0 {
            0.0
        } else {
            c as f64 / total as f64
        }
    })
}

pub fn activation_report(metrics: &Metrics) -> Result<ActivationReport> {
    let trace = metrics.trace.as_ref().ok_or(Error::TraceMissing)?;
    let mut counts = [0u64; 4];
    for &a in &trace.activations {
        let bucket = match a {
            0 => continue,
            1 => 0,
            2 => 1,
            3..=5 => 2,
            _ => 3,
        };
        counts[bucket] += 1;
    }
    let activated = counts.iter().sum();
    Ok(ActivationReport {
        activated,
        counts,
        fractions: fractions(counts, activated),
    })
}

pub fn edge_access_report(metrics: &Metrics) -> Result<EdgeAccessReport> {
    let trace = metrics.trace.as_ref().ok_or(Error::TraceMissing)?;
    let mut counts = [0u64; 5];
    for &a in &trace.edge_accesses {
        let bucket = match a {
            0 => 0,
            1 => 1,
            2 => 2,
            3..=5 => 3,
            _ => 4,
        };
        counts[bucket] += 1;
    }
    let entries = trace.edge_accesses.len() as u64;
    Ok(EdgeAccessReport {
        entries,
        counts,
        fractions: fractions(counts, entries),
        adjacency_reads: metrics.adjacency_reads,
        setup_adjacency_reads: metrics.setup_adjacency_reads,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricsFormat {
    Json,
    Csv,
}

impl FromStr for MetricsFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(MetricsFormat::Json),
            "csv" => Ok(MetricsFormat::Csv),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

impl fmt::Display for MetricsFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricsFormat::Json => "json",
            MetricsFormat::Csv => "csv",
        })
    }
}

/// Stable metrics schema; field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub algorithm: String,
    pub graph: String,
    pub n: u64,
    pub m: u64,
    pub k_max: u32,
    pub iterations: u64,
    pub atomic_rmw: u64,
    pub adjacency_reads: u64,
    pub elapsed_ms: f64,
}

impl MetricsRecord {
    pub fn new(result: &CoreResult, graph_name: &str, g: &Graph) -> Self {
        MetricsRecord {
            algorithm: result.algorithm.to_string(),
            graph: graph_name.to_string(),
            n: g.n() as u64,
            m: g.m() as u64,
            k_max: result.k_max(),
            iterations: result.metrics.iterations,
            atomic_rmw: result.metrics.atomic_rmw,
            adjacency_reads: result.metrics.adjacency_reads,
            elapsed_ms: result.metrics.elapsed.as_secs_f64() * 1e3,
        }
    }
}

/// Writes records as one JSON object per line, or as CSV with a header.
pub fn write_records<W: Write>(
    records: &[MetricsRecord],
    mut w: W,
    format: MetricsFormat,
) -> Result<()> {
    match format {
        MetricsFormat::Json => {
            for r in records {
                serde_json::to_writer(&mut w, r)?;
                writeln!(w)?;
            }
            w.flush()?;
        }
        MetricsFormat::Csv => {
            let mut out = csv::Writer::from_writer(w);
            for r in records {
                out.serialize(r)?;
            }
            if records.is_empty() {
                out.write_record(CSV_HEADER)?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

pub const CSV_HEADER: [&str; 9] = [
    "algorithm",
    "graph",
    "n",
    "m",
    "k_max",
    "iterations",
    "atomic_rmw",
    "adjacency_reads",
    "elapsed_ms",
];

pub fn emit_metrics<W: Write>(
    result: &CoreResult,
    graph_name: &str,
    g: &Graph,
    w: W,
    format: MetricsFormat,
) -> Result<()> {
    write_records(&[MetricsRecord::new(result, graph_name, g)], w, format)
}
