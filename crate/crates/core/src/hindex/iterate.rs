use std::time::Instant;

use super::{check_frontier_precision, check_monotone_bound, neighbor_h_index};
use crate::engine::{Algorithm, CoreResult, Options};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::metrics::Recorder;
use crate::peel::bz_serial;
use crate::runtime::FrontierQueue;

fn initial_active(g: &Graph) -> Vec<VertexId> {
    g.vertices().filter(|&v| g.deg(v) > 0).collect()
}

/// Re-estimates every active vertex each iteration; a vertex whose value
/// changed activates all of its neighbours for the next one.
pub fn nbr_core(g: &Graph, opts: &Options) -> Result<CoreResult> {
    let start = Instant::now();
    let pool = opts.pool()?;
    let rec = Recorder::new(g, opts.trace);
    let mut queue = FrontierQueue::new(g.n());
    let truth = opts.check_invariants.then(|| bz_serial(g).coreness);

    let mut core = g.degrees();
    let mut active = initial_active(g);
    let mut iterations = 0;
    while !active.is_empty() {
        iterations += 1;
        let (cur, q) = (&core, &queue);
        let changes: Vec<(VertexId, u32)> = pool.filter_map(&active, &rec, |v, t| {
            t.activate(v);
            let nbrs = t.neighbors(g, v);
            let c = cur[v as usize];
            let h = neighbor_h_index(nbrs, |u| cur[u as usize], c);
            (h < c).then(|| {
                for &u in nbrs {
                    q.push(u);
                }
                (v, h)
            })
        });
        rec.drain_cycle();

        let previous = truth.as_ref().map(|_| core.clone());
        for &(v, h) in &changes {
            core[v as usize] = h;
        }
        if let (Some(truth), Some(previous)) = (&truth, &previous) {
            check_monotone_bound(truth, previous, &core, Algorithm::NbrCore.name())?;
            rec.invariant_check();
        }
        active = queue.drain();
    }
    Ok(CoreResult {
        coreness: core,
        metrics: rec.finish(iterations, start.elapsed()),
        algorithm: Algorithm::NbrCore,
    })
}

/// Re-estimates only vertices with fewer than `core[v]` neighbours at or
/// above `core[v]`; exactly those are the ones whose estimate drops.
///
/// `cnt` is recomputed by a fresh neighbour scan over the active set every
/// iteration, and the active set is the union of the last frontier's
/// neighbourhoods.
pub fn cnt_core(g: &Graph, opts: &Options) -> Result<CoreResult> {
    let start = Instant::now();
    let pool = opts.pool()?;
    let rec = Recorder::new(g, opts.trace);
    let mut queue = FrontierQueue::new(g.n());
    let truth = opts.check_invariants.then(|| bz_serial(g).coreness);
    let name = Algorithm::CntCore.name();

    let mut core = g.degrees();
    let mut active = initial_active(g);
    let mut iterations = 0;
    while !active.is_empty() {
        let cur = &core;
        let frontier: Vec<VertexId> = pool.filter_map(&active, &rec, |v, t| {
            t.activate(v);
            let c = cur[v as usize];
            let cnt = t
                .neighbors(g, v)
                .iter()
                .filter(|&&u| cur[u as usize] >= c)
                .count();
            ((cnt as u32) < c).then_some(v)
        });
        rec.drain_cycle();
        if truth.is_some() {
            let mut selected = vec![false; g.n()];
            for &v in &frontier {
                selected[v as usize] = true;
            }
            check_frontier_precision(g, &core, &selected, name)?;
            rec.invariant_check();
        }
        if frontier.is_empty() {
            break;
        }
        iterations += 1;

        let q = &queue;
        let changes: Vec<(VertexId, u32)> = pool.filter_map(&frontier, &rec, |v, t| {
            let nbrs = t.neighbors(g, v);
            let h = neighbor_h_index(nbrs, |u| cur[u as usize], cur[v as usize]);
            for &u in nbrs {
                q.push(u);
            }
            Some((v, h))
        });
        rec.drain_cycle();

        let previous = truth.as_ref().map(|_| core.clone());
        for &(v, h) in &changes {
            if truth.is_some() && h >= core[v as usize] {
                return Err(Error::InvariantViolation {
                    algorithm: name,
                    detail: format!("frontier vertex {v} kept its estimate {h}"),
                });
            }
            core[v as usize] = h;
        }
        if let (Some(truth), Some(previous)) = (&truth, &previous) {
            check_monotone_bound(truth, previous, &core, name)?;
        }
        active = queue.drain();
    }
    Ok(CoreResult {
        coreness: core,
        metrics: rec.finish(iterations, start.elapsed()),
        algorithm: Algorithm::CntCore,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn traced() -> Options {
        Options {
            trace: true,
            check_invariants: true,
            ..Options::default()
        }
    }

    #[test]
    fn nbr_core_fixtures() {
        assert_eq!(
            nbr_core(&g1(), &traced()).unwrap().coreness,
            vec![1, 1, 2, 2, 2, 2]
        );

        let r = nbr_core(&path(5), &traced()).unwrap();
        assert_eq!(r.coreness, vec![1; 5]);
        // two rounds that change something, one that confirms
        assert_eq!(r.metrics.iterations, 3);

        let r = nbr_core(&complete(4), &traced()).unwrap();
        assert_eq!(r.coreness, vec![3; 4]);
        assert_eq!(r.metrics.iterations, 1);
    }

    #[test]
    fn cnt_core_fixtures() {
        let r = cnt_core(&g1(), &traced()).unwrap();
        assert_eq!(r.coreness, vec![1, 1, 2, 2, 2, 2]);
        assert_eq!(r.metrics.iterations, 1);

        let r = cnt_core(&complete(4), &traced()).unwrap();
        assert_eq!(r.metrics.iterations, 0);
        let act = r.metrics.trace.unwrap().activations;
        assert_eq!(act, vec![1; 4]);

        let r = cnt_core(&path(5), &traced()).unwrap();
        assert_eq!(r.coreness, vec![1; 5]);
        assert_eq!(r.metrics.iterations, 2);
        assert_eq!(r.metrics.trace.as_ref().unwrap().activations[2], 2);
    }

    #[test]
    fn cnt_core_reads_on_path() {
        // iteration 1: cnt 8 + hindex(v1, v3) 4; iteration 2: cnt(v0,v2,v4) 4 +
        // hindex(v2) 2; final round: cnt(v1, v3) 4
        let r = cnt_core(&path(5), &Options::default()).unwrap();
        assert_eq!(r.metrics.adjacency_reads, 22);
    }
}
