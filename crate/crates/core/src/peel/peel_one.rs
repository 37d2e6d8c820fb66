use std::time::Instant;

use crate::engine::{Algorithm, CoreResult, Options};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::metrics::{Recorder, Tally};
use crate::runtime::{run_supersteps, AtomicCellArray, FrontierQueue, Pool, StepMode, Superstep};

/// Level-synchronous PeelOne: one array holds residual degree and coreness.
///
/// At level `k` the frontier is every vertex whose cell reads `k`. The
/// scatter applies a decrement clamped at `k` to each neighbour above `k`,
/// so no residual vertex ever reads below the current level and no removed
/// flag is needed. A neighbour driven from `k+1` to `k` joins the next
/// superstep's frontier.
pub fn peel_one(g: &Graph, opts: &Options) -> Result<CoreResult> {
    run(g, opts, StepMode::Synchronous, Algorithm::PeelOne)
}

/// PeelOne with a dynamic frontier: vertices that reach `k` are drained
/// within the current level, so the iteration count equals `k_max`.
pub fn peel_one_dynamic(g: &Graph, opts: &Options) -> Result<CoreResult> {
    run(g, opts, StepMode::Dynamic, Algorithm::PoDyn)
}

fn run(g: &Graph, opts: &Options, mode: StepMode, algorithm: Algorithm) -> Result<CoreResult> {
    let start = Instant::now();
    let pool = opts.pool()?;
    let rec = Recorder::new(g, opts.trace);
    let mut queue = FrontierQueue::new(g.n());

    let mut step = PeelOne {
        g,
        pool: &pool,
        rec: &rec,
        core: AtomicCellArray::from_values(g.vertices().map(|v| g.deg(v) as i32)),
        remaining: g.vertices().filter(|&v| g.deg(v) > 0).count(),
        k: 0,
        mode,
        algorithm,
        done: opts
            .check_invariants
            .then(|| g.vertices().map(|v| g.deg(v) == 0).collect()),
    };
    let iterations = run_supersteps(&pool, &mut queue, mode, &mut step, &rec)?;
    let coreness = step.core.to_vec().into_iter().map(|c| c as u32).collect();
    Ok(CoreResult {
        coreness,
        metrics: rec.finish(iterations, start.elapsed()),
        algorithm,
    })
}

struct PeelOne<'a> {
    g: &'a Graph,
    pool: &'a Pool,
    rec: &'a Recorder,
    core: AtomicCellArray,
    remaining: usize,
    k: i32,
    mode: StepMode,
    algorithm: Algorithm,
    /// Processed flags, kept only when invariant checks are on.
    done: Option<Vec<bool>>,
}

impl PeelOne<'_> {
    fn level_frontier(&self) -> Vec<VertexId> {
        let (core, k) = (&self.core, self.k);
        self.pool.select(self.g.n(), |v| core.load(v as usize) == k)
    }

    fn violation(&self, detail: String) -> Error {
        Error::InvariantViolation {
            algorithm: self.algorithm.name(),
            detail,
        }
    }
}

impl Superstep for PeelOne<'_> {
    fn scan(&mut self, carried: Vec<VertexId>) -> Option<Vec<VertexId>> {
        if !carried.is_empty() {
            return Some(carried);
        }
        if self.remaining == 0 {
            return None;
        }
        loop {
            self.k += 1;
            let frontier = self.level_frontier();
            if !frontier.is_empty() || self.mode == StepMode::Dynamic {
                return Some(frontier);
            }
        }
    }

    fn scatter(&self, v: VertexId, queue: &FrontierQueue, t: &mut Tally<'_>) {
        t.activate(v);
        let k = self.k;
        for &u in t.neighbors(self.g, v) {
            if self.core.load(u as usize) > k {
                let old = self.core.clamped_decrement(u as usize, k);
                t.rmw(u);
                if old == k + 1 {
                    queue.push(u);
                }
            }
        }
    }

    fn cycle_end(&mut self, frontier: &[VertexId], _pushed: &[VertexId]) -> Result<()> {
        self.remaining -= frontier.len();
        let Some(done) = self.done.as_mut() else {
            return Ok(());
        };
        for &v in frontier {
            if std::mem::replace(&mut done[v as usize], true) {
                return Err(Error::InvariantViolation {
                    algorithm: self.algorithm.name(),
                    detail: format!("vertex {v} entered a frontier twice"),
                });
            }
        }
        let k = self.k;
        let done = self.done.as_ref().unwrap();
        for v in self.g.vertices() {
            let c = self.core.load(v as usize);
            if !done[v as usize] && c < k {
                return Err(
                    self.violation(format!("unprocessed vertex {v} reads {c} below level {k}"))
                );
            }
        }
        if let Some(&v) = frontier.iter().find(|&&v| self.core.load(v as usize) != k) {
            return Err(self.violation(format!("frontier vertex {v} left level {k}")));
        }
        self.rec.invariant_check();
        Ok(())
    }
}
