use std::time::Instant;

use crate::engine::{Algorithm, CoreResult, Options};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::metrics::{Recorder, Tally};
use crate::runtime::{run_supersteps, AtomicCellArray, FrontierQueue, Pool, StepMode, Superstep};

/// Dynamic-frontier peeling with plain fetch-sub and compensating adds.
///
/// Every neighbour that was still unclaimed when the drain cycle began is
/// decremented, as if all workers of the cycle had read the cell before any
/// of them wrote it. A decrement that leaves the cell below `k` is undone
/// with a fetch-add, so a hub at `k + m` hit by `n > m` concurrent removers
/// costs `2n - m` atomic operations. Claimed flags are fixed for the length
/// of a cycle, which makes the operation count schedule-independent.
pub fn pp_dynamic(g: &Graph, opts: &Options) -> Result<CoreResult> {
    let start = Instant::now();
    let pool = opts.pool()?;
    let rec = Recorder::new(g, opts.trace);
    let mut queue = FrontierQueue::new(g.n());

    let claimed: Vec<bool> = g.vertices().map(|v| g.deg(v) == 0).collect();
    let mut step = PpDyn {
        g,
        pool: &pool,
        deg: AtomicCellArray::from_values(g.vertices().map(|v| g.deg(v) as i32)),
        remaining: claimed.iter().filter(|&&c| !c).count(),
        claimed,
        k: 0,
        check: opts.check_invariants,
        rec: &rec,
    };
    let iterations = run_supersteps(&pool, &mut queue, StepMode::Dynamic, &mut step, &rec)?;
    let coreness = step.deg.to_vec().into_iter().map(|c| c as u32).collect();
    Ok(CoreResult {
        coreness,
        metrics: rec.finish(iterations, start.elapsed()),
        algorithm: Algorithm::PpDyn,
    })
}

struct PpDyn<'a> {
    g: &'a Graph,
    pool: &'a Pool,
    deg: AtomicCellArray,
    claimed: Vec<bool>,
    remaining: usize,
    k: i32,
    check: bool,
    rec: &'a Recorder,
}

impl Superstep for PpDyn<'_> {
    fn scan(&mut self, _carried: Vec<VertexId>) -> Option<Vec<VertexId>> {
        if self.remaining == 0 {
            return None;
        }
        self.k += 1;
        let (claimed, deg, k) = (&self.claimed, &self.deg, self.k);
        let frontier = self.pool.select(self.g.n(), |v| {
            !claimed[v as usize] && deg.load(v as usize) == k
        });
        for &v in &frontier {
            self.claimed[v as usize] = true;
        }
        Some(frontier)
    }

    fn scatter(&self, v: VertexId, queue: &FrontierQueue, t: &mut Tally<'_>) {
        t.activate(v);
        let k = self.k;
        for &u in t.neighbors(self.g, v) {
            if self.claimed[u as usize] {
                continue;
            }
            let old = self.deg.fetch_sub(u as usize, 1);
            t.rmw(u);
            if old - 1 < k {
                self.deg.fetch_add(u as usize, 1);
                t.rmw(u);
            } else if old - 1 == k {
                queue.push(u);
            }
        }
    }

    fn cycle_end(&mut self, frontier: &[VertexId], pushed: &[VertexId]) -> Result<()> {
        self.remaining -= frontier.len();
        for &u in pushed {
            self.claimed[u as usize] = true;
        }
        if self.check {
            let k = self.k;
            for v in self.g.vertices() {
                let d = self.deg.load(v as usize);
                if !self.claimed[v as usize] && d <= k {
                    return Err(Error::InvariantViolation {
                        algorithm: Algorithm::PpDyn.name(),
                        detail: format!("unclaimed vertex {v} reads {d} at level {k}"),
                    });
                }
            }
            self.rec.invariant_check();
        }
        Ok(())
    }
}
