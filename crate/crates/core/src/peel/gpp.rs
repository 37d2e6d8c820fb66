use std::time::Instant;

use crate::engine::{Algorithm, CoreResult, Options};
use crate::error::Result;
use crate::graph::{Graph, VertexId};
use crate::metrics::{Recorder, Tally};
use crate::runtime::{run_supersteps, AtomicCellArray, FrontierQueue, Pool, StepMode, Superstep};

/// General parallel peel with separate residual-degree and coreness arrays.
///
/// Per superstep the scan takes every unremoved vertex with `deg <= k` and
/// fixes its coreness at `k`; the scatter decrements `deg` of every neighbour
/// not removed before this superstep. `deg` of a residual vertex may drop
/// below `k`; the `removed` flags keep such vertices apart from peeled ones.
/// Removal is committed at the barrier, so two frontier vertices that are
/// neighbours decrement each other.
pub fn gpp(g: &Graph, opts: &Options) -> Result<CoreResult> {
    let start = Instant::now();
    let pool = opts.pool()?;
    let rec = Recorder::new(g, opts.trace);
    let mut queue = FrontierQueue::new(g.n());

    let removed: Vec<bool> = g.vertices().map(|v| g.deg(v) == 0).collect();
    let remaining = removed.iter().filter(|&&r| !r).count();
    let mut step = Gpp {
        g,
        pool: &pool,
        deg: AtomicCellArray::from_values(g.vertices().map(|v| g.deg(v) as i32)),
        core: vec![0; g.n()],
        removed,
        remaining,
        k: 0,
    };
    let iterations = run_supersteps(&pool, &mut queue, StepMode::Synchronous, &mut step, &rec)?;
    Ok(CoreResult {
        coreness: step.core,
        metrics: rec.finish(iterations, start.elapsed()),
        algorithm: Algorithm::Gpp,
    })
}

struct Gpp<'a> {
    g: &'a Graph,
    pool: &'a Pool,
    deg: AtomicCellArray,
    core: Vec<u32>,
    removed: Vec<bool>,
    remaining: usize,
    k: i32,
}

impl Superstep for Gpp<'_> {
    fn scan(&mut self, _carried: Vec<VertexId>) -> Option<Vec<VertexId>> {
        if self.remaining == 0 {
            return None;
        }
        loop {
            let (removed, deg, k) = (&self.removed, &self.deg, self.k);
            let frontier = self.pool.select(self.g.n(), |v| {
                !removed[v as usize] && deg.load(v as usize) <= k
            });
            if frontier.is_empty() {
                self.k += 1;
                continue;
            }
            for &v in &frontier {
                self.core[v as usize] = self.k as u32;
            }
            return Some(frontier);
        }
    }

    fn scatter(&self, v: VertexId, _queue: &FrontierQueue, t: &mut Tally<'_>) {
        t.activate(v);
        for &u in t.neighbors(self.g, v) {
            if !self.removed[u as usize] {
                self.deg.fetch_sub(u as usize, 1);
                t.rmw(u);
            }
        }
    }

    fn cycle_end(&mut self, frontier: &[VertexId], _pushed: &[VertexId]) -> Result<()> {
        for &v in frontier {
            self.removed[v as usize] = true;
        }
        self.remaining -= frontier.len();
        Ok(())
    }
}
