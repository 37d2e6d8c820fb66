use std::time::Instant;

use crate::engine::{Algorithm, CoreResult};
use crate::graph::Graph;
use crate::metrics::Recorder;

/// Serial bin-sort peeling (Batagelj-Zaversnik), O(n + m).
///
/// The oracle every parallel engine is checked against.
pub fn bz_serial(g: &Graph) -> CoreResult {
    bz_serial_traced(g, false)
}

pub(crate) fn bz_serial_traced(g: &Graph, trace: bool) -> CoreResult {
    let start = Instant::now();
    let rec = Recorder::new(g, trace);
    let mut t = rec.tally();

    let n = g.n();
    let mut deg: Vec<u32> = g.degrees();
    let max_deg = deg.iter().copied().max().unwrap_or(0) as usize;

    // bin[d] = first position of degree d in `vert`
    let mut bin = vec![0usize; max_deg + 1];
    for &d in &deg {
        bin[d as usize] += 1;
    }
    let mut next = 0;
    for b in bin.iter_mut() {
        let count = *b;
        *b = next;
        next += count;
    }
    let mut pos = vec![0usize; n];
    let mut vert = vec![0u32; n];
    for v in 0..n {
        let d = deg[v] as usize;
        pos[v] = bin[d];
        vert[pos[v]] = v as u32;
        bin[d] += 1;
    }
    for d in (1..=max_deg).rev() {
        bin[d] = bin[d - 1];
    }
    bin[0] = 0;

    for i in 0..n {
        let v = vert[i];
        t.activate(v);
        let dv = deg[v as usize];
        for &u in t.neighbors(g, v) {
            let du = deg[u as usize];
            if du > dv {
                // swap u with the first vertex of its bin, then shrink the bin
                let pu = pos[u as usize];
                let pw = bin[du as usize];
                let w = vert[pw];
                if u != w {
                    vert.swap(pu, pw);
                    pos[u as usize] = pw;
                    pos[w as usize] = pu;
                }
                bin[du as usize] += 1;
                deg[u as usize] = du - 1;
            }
        }
    }
    rec.absorb(t);

    let iterations = n as u64;
    CoreResult {
        coreness: deg,
        metrics: rec.finish(iterations, start.elapsed()),
        algorithm: Algorithm::Bz,
    }
}
