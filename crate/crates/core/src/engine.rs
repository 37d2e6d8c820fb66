use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::metrics::Metrics;
use crate::runtime::{Pool, DEFAULT_CHUNK};
use crate::{hindex, peel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Bz,
    Gpp,
    PeelOne,
    PpDyn,
    PoDyn,
    NbrCore,
    CntCore,
    HistoCore,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::Bz,
        Algorithm::Gpp,
        Algorithm::PeelOne,
        Algorithm::PpDyn,
        Algorithm::PoDyn,
        Algorithm::NbrCore,
        Algorithm::CntCore,
        Algorithm::HistoCore,
    ];

    /// Everything checked against the serial oracle.
    pub const PARALLEL: [Algorithm; 7] = [
        Algorithm::Gpp,
        Algorithm::PeelOne,
        Algorithm::PpDyn,
        Algorithm::PoDyn,
        Algorithm::NbrCore,
        Algorithm::CntCore,
        Algorithm::HistoCore,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Bz => "bz",
            Algorithm::Gpp => "gpp",
            Algorithm::PeelOne => "peelone",
            Algorithm::PpDyn => "pp-dyn",
            Algorithm::PoDyn => "po-dyn",
            Algorithm::NbrCore => "nbrcore",
            Algorithm::CntCore => "cntcore",
            Algorithm::HistoCore => "histocore",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::UnknownAlgorithm(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    pub workers: usize,
    /// Items per work-claiming chunk.
    pub chunk: usize,
    /// Record per-vertex activations and per-entry accesses.
    pub trace: bool,
    /// Brute-force invariant sweeps at every iteration boundary.
    pub check_invariants: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            workers: 1,
            chunk: DEFAULT_CHUNK,
            trace: false,
            check_invariants: false,
        }
    }
}

impl Options {
    pub fn workers(workers: usize) -> Self {
        Options {
            workers,
            ..Options::default()
        }
    }

    pub(crate) fn pool(&self) -> Result<Pool> {
        Pool::with_chunk(self.workers, self.chunk)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoreResult {
    pub coreness: Vec<u32>,
    pub metrics: Metrics,
    pub algorithm: Algorithm,
}

impl CoreResult {
    pub fn k_max(&self) -> u32 {
        self.coreness.iter().copied().max().unwrap_or(0)
    }
}

pub fn decompose(g: &Graph, algorithm: Algorithm, opts: &Options) -> Result<CoreResult> {
    match algorithm {
        Algorithm::Bz => Ok(peel::bz_serial_traced(g, opts.trace)),
        Algorithm::Gpp => peel::gpp(g, opts),
        Algorithm::PeelOne => peel::peel_one(g, opts),
        Algorithm::PpDyn => peel::pp_dynamic(g, opts),
        Algorithm::PoDyn => peel::peel_one_dynamic(g, opts),
        Algorithm::NbrCore => hindex::nbr_core(g, opts),
        Algorithm::CntCore => hindex::cnt_core(g, opts),
        Algorithm::HistoCore => hindex::histo_core(g, opts),
    }
}

/// First vertex where two coreness arrays disagree.
pub fn first_mismatch(expected: &[u32], actual: &[u32]) -> Option<usize> {
    if expected.len() != actual.len() {
        return Some(expected.len().min(actual.len()));
    }
    expected.iter().zip(actual).position(|(a, b)| a != b)
}
