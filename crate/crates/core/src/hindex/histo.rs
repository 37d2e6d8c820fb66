use std::sync::atomic::{AtomicBool, Ordering::Relaxed};
use std::time::Instant;

use super::{check_frontier_precision, check_monotone_bound};
use crate::engine::{Algorithm, CoreResult, Options};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::metrics::Recorder;
use crate::peel::bz_serial;
use crate::runtime::{AtomicCellArray, FrontierQueue};

/// Per-vertex neighbour-estimate histograms in one flat array.
///
/// Vertex `v` owns slots `1..=deg(v)`. Slot `j < core[v]` counts neighbours
/// whose estimate is exactly `j`; slot `core[v]` counts neighbours at or
/// above `core[v]`, i.e. `cnt(v)`. Slots above `core[v]` are stale and never
/// read.
pub struct HistogramStore {
    base: Vec<u64>,
    cells: AtomicCellArray,
}

impl HistogramStore {
    /// All-zero histograms shaped after `g`.
    pub fn new(g: &Graph) -> Self {
        HistogramStore {
            base: g.offsets().to_vec(),
            cells: AtomicCellArray::new(g.adjacency().len()),
        }
    }

    #[inline]
    fn idx(&self, v: VertexId, j: u32) -> usize {
        debug_assert!(j >= 1 && (j as u64) <= self.base[v as usize + 1] - self.base[v as usize]);
        (self.base[v as usize] + j as u64 - 1) as usize
    }

    pub fn get(&self, v: VertexId, j: u32) -> u32 {
        self.cells.load(self.idx(v, j)) as u32
    }

    /// Slots `1..=deg(v)` of `v`, index 0 holding slot 1.
    pub fn slots(&self, v: VertexId) -> Vec<u32> {
        let (lo, hi) = (self.base[v as usize], self.base[v as usize + 1]);
        (lo..hi)
            .map(|i| self.cells.load(i as usize) as u32)
            .collect()
    }

    /// `cnt(v)` when `v`'s estimate is `core_v`.
    pub fn cnt(&self, v: VertexId, core_v: u32) -> u32 {
        self.get(v, core_v)
    }

    /// Builds `v`'s histogram from scratch; returns the number of adjacency
    /// entries read.
    pub fn fill(&self, g: &Graph, core: &[u32], v: VertexId) -> u64 {
        let own = core[v as usize];
        let nbrs = g.neighbors(v);
        for j in 1..=nbrs.len() as u32 {
            self.cells.store(self.idx(v, j), 0);
        }
        for &u in nbrs {
            let j = core[u as usize].min(own);
            if j > 0 {
                let i = self.idx(v, j);
                self.cells.store(i, self.cells.load(i) + 1);
            }
        }
        nbrs.len() as u64
    }

    /// Recomputes `v`'s estimate from its histogram alone: the largest
    /// `h <= core_v` with at least `h` neighbours at or above `h`. Slots
    /// `h..=core_v` are folded into slot `h`, which becomes the new `cnt`.
    /// Returns the new estimate and whether it changed.
    pub fn sum_histo(&self, v: VertexId, core_v: u32) -> (u32, bool) {
        let mut acc = 0u32;
        let mut h = core_v;
        while h > 0 {
            acc += self.get(v, h);
            if acc >= h {
                break;
            }
            h -= 1;
        }
        if h < core_v {
            if h > 0 {
                self.cells.store(self.idx(v, h), acc as i32);
            }
            (h, true)
        } else {
            (h, false)
        }
    }

    /// Moves one neighbour of `u` from estimate `old` to `new`, given
    /// `new < core_u`. Two atomic operations. Returns `true` exactly when
    /// this move took `cnt(u)` from `core_u` to `core_u - 1`.
    pub fn update_histo(&self, u: VertexId, core_u: u32, old: u32, new: u32) -> bool {
        debug_assert!(new < core_u && new < old);
        let ret = self.cells.fetch_sub(self.idx(u, old.min(core_u)), 1);
        if new > 0 {
            self.cells.fetch_add(self.idx(u, new), 1);
        }
        old >= core_u && ret as u32 == core_u
    }
}

/// Serial histogram construction for every vertex under estimates `core`.
pub fn init_histo(g: &Graph, core: &[u32]) -> HistogramStore {
    let store = HistogramStore::new(g);
    for v in g.vertices() {
        store.fill(g, core, v);
    }
    store
}

/// h-index iteration driven by per-vertex histograms.
///
/// After one neighbour scan to build the histograms, a vertex never rescans
/// its own neighbourhood: its new estimate comes from its histogram, and a
/// vertex whose estimate drops touches only the neighbours that have to move
/// it between slots. A neighbour is queued by the single update that pushes
/// its `cnt` below its estimate.
pub fn histo_core(g: &Graph, opts: &Options) -> Result<CoreResult> {
    let start = Instant::now();
    let pool = opts.pool()?;
    let mut rec = Recorder::new(g, opts.trace);
    let mut queue = FrontierQueue::new(g.n());
    let truth = opts.check_invariants.then(|| bz_serial(g).coreness);
    let name = Algorithm::HistoCore.name();
    let violation = |detail: String| Error::InvariantViolation {
        algorithm: name,
        detail,
    };

    let mut core = g.degrees();
    let store = HistogramStore::new(g);
    let live: Vec<VertexId> = g.vertices().filter(|&v| g.deg(v) > 0).collect();
    {
        let (cur, st) = (&core, &store);
        // setup reads go to the scalar counter only, not the entry trace
        pool.for_each(&live, &rec, |v, _| {
            st.fill(g, cur, v);
        });
    }
    rec.add_setup_reads(g.adjacency().len() as u64);

    let mut frontier: Vec<VertexId> = {
        let (cur, st) = (&core, &store);
        pool.filter_map(&live, &rec, |v, t| {
            t.activate(v);
            let c = cur[v as usize];
            (st.cnt(v, c) < c).then_some(v)
        })
    };
    if truth.is_some() {
        check_histograms(g, &core, &store).map_err(&violation)?;
        check_selected(g, &core, &frontier, name)?;
        rec.invariant_check();
    }

    let mut oldcore = core.clone();
    let duplicate = AtomicBool::new(false);
    let mut iterations = 0;
    while !frontier.is_empty() {
        iterations += 1;

        let changed: Vec<(VertexId, u32)> = {
            let (cur, st) = (&core, &store);
            pool.filter_map(&frontier, &rec, |v, t| {
                t.activate(v);
                let (h, changed) = st.sum_histo(v, cur[v as usize]);
                changed.then_some((v, h))
            })
        };
        rec.drain_cycle();
        if truth.is_some() && changed.len() != frontier.len() {
            return Err(violation(format!(
                "{} of {} frontier vertices kept their estimate",
                frontier.len() - changed.len(),
                frontier.len()
            )));
        }
        let previous = truth.as_ref().map(|_| core.clone());
        let movers: Vec<VertexId> = changed.iter().map(|&(v, _)| v).collect();
        for &(v, h) in &changed {
            oldcore[v as usize] = core[v as usize];
            core[v as usize] = h;
        }

        {
            let (cur, old, st, q, dup) = (&core, &oldcore, &store, &queue, &duplicate);
            pool.for_each(&movers, &rec, |v, t| {
                let (was, now) = (old[v as usize], cur[v as usize]);
                for &u in t.neighbors(g, v) {
                    let cu = cur[u as usize];
                    if cu <= now {
                        continue;
                    }
                    t.rmw(u);
                    if now > 0 {
                        t.rmw(u);
                    }
                    if st.update_histo(u, cu, was, now) && !q.push(u) {
                        dup.store(true, Relaxed);
                    }
                }
            });
        }
        rec.drain_cycle();
        frontier = queue.drain();

        if let (Some(truth), Some(previous)) = (&truth, &previous) {
            if duplicate.load(Relaxed) {
                return Err(violation(
                    "a vertex was triggered twice in one iteration".into(),
                ));
            }
            check_monotone_bound(truth, previous, &core, name)?;
            check_histograms(g, &core, &store).map_err(&violation)?;
            check_selected(g, &core, &frontier, name)?;
            rec.invariant_check();
        }
    }
    Ok(CoreResult {
        coreness: core,
        metrics: rec.finish(iterations, start.elapsed()),
        algorithm: Algorithm::HistoCore,
    })
}

fn check_selected(
    g: &Graph,
    core: &[u32],
    frontier: &[VertexId],
    name: &'static str,
) -> Result<()> {
    let mut selected = vec![false; g.n()];
    for &v in frontier {
        selected[v as usize] = true;
    }
    check_frontier_precision(g, core, &selected, name)
}

/// Every live slot equals a fresh count over the neighbourhood.
fn check_histograms(
    g: &Graph,
    core: &[u32],
    store: &HistogramStore,
) -> std::result::Result<(), String> {
    let fresh = init_histo(g, core);
    for v in g.vertices() {
        for j in 1..=core[v as usize] {
            let (have, want) = (store.get(v, j), fresh.get(v, j));
            if have != want {
                return Err(format!("vertex {v} slot {j} holds {have}, expected {want}"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::hindex::cnt_core;

    fn checked() -> Options {
        Options {
            trace: true,
            check_invariants: true,
            ..Options::default()
        }
    }

    #[test]
    fn init_on_fixtures() {
        let g = g1();
        let s = init_histo(&g, &g.degrees());
        assert_eq!(s.slots(5), vec![2, 2, 1, 0, 0]);
        assert_eq!(s.slots(0), vec![1]);
        let k4 = complete(4);
        let s = init_histo(&k4, &k4.degrees());
        assert_eq!(s.slots(2), vec![0, 0, 3]);
    }

    #[test]
    fn sum_folds_slots() {
        let g = g1();
        let s = init_histo(&g, &g.degrees());
        assert_eq!(s.sum_histo(5, 5), (2, true));
        assert_eq!(s.get(5, 2), 3);
        assert_eq!(s.get(5, 1), 2);

        let p = path(5);
        let s = init_histo(&p, &p.degrees());
        assert_eq!(s.sum_histo(1, 2), (1, true));
        assert_eq!(s.get(1, 1), 2);
        // v2 sees two neighbours at 2: no change
        assert_eq!(s.sum_histo(2, 2), (2, false));
    }

    #[test]
    fn update_triggers_once() {
        let p = path(5);
        let s = init_histo(&p, &p.degrees());
        assert_eq!(s.cnt(2, 2), 2);
        assert!(s.update_histo(2, 2, 2, 1));
        assert!(!s.update_histo(2, 2, 2, 1));
        assert_eq!(s.slots(2), vec![2, 0]);
    }

    #[test]
    fn fixtures_converge() {
        let r = histo_core(&g1(), &checked()).unwrap();
        assert_eq!(r.coreness, vec![1, 1, 2, 2, 2, 2]);
        assert_eq!(r.metrics.iterations, 1);

        let r = histo_core(&path(5), &checked()).unwrap();
        assert_eq!(r.coreness, vec![1; 5]);
        assert_eq!(r.metrics.iterations, 2);

        let r = histo_core(&complete(4), &checked()).unwrap();
        assert_eq!(r.coreness, vec![3; 4]);
        assert_eq!(r.metrics.iterations, 0);
        assert_eq!(r.metrics.post_setup_reads(), 0);
        assert!(r
            .metrics
            .trace
            .unwrap()
            .edge_accesses
            .iter()
            .all(|&a| a == 0));
    }

    #[test]
    fn fewer_reads_than_rescanning() {
        let p = path(5);
        let h = histo_core(&p, &Options::default()).unwrap();
        assert_eq!(h.metrics.setup_adjacency_reads, 8);
        assert_eq!(h.metrics.post_setup_reads(), 4 + 2);
        let c = cnt_core(&p, &Options::default()).unwrap();
        assert!(h.metrics.post_setup_reads() < c.metrics.adjacency_reads);
    }

    #[test]
    fn isolated_vertices_stay_zero() {
        let g = Graph::from_edges(4, [(1, 2)]).unwrap();
        let r = histo_core(&g, &checked()).unwrap();
        assert_eq!(r.coreness, vec![0, 1, 1, 0]);
    }
}
