//! Shared corpus and oracles written straight from the definitions, with no
//! code in common with the engines.
#![allow(dead_code)]

use std::collections::VecDeque;

use kcore::{generate_graph, Graph, GraphSpec, VertexId};

pub const G1_EDGES: &str = "0 5\n1 5\n2 3\n2 5\n3 4\n3 5\n4 5";

/// G1 with dense ids equal to labels.
pub fn g1() -> Graph {
    let edges = G1_EDGES.lines().map(|l| {
        let (u, v) = l.split_once(' ').unwrap();
        (u.parse().unwrap(), v.parse().unwrap())
    });
    Graph::from_edges(6, edges).unwrap()
}

pub fn path(n: u32) -> Graph {
    Graph::from_edges(n as usize, (1..n).map(|v| (v - 1, v))).unwrap()
}

pub fn complete(n: u32) -> Graph {
    Graph::from_edges(
        n as usize,
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))),
    )
    .unwrap()
}

pub struct Named {
    pub name: String,
    pub graph: Graph,
}

pub const ER_PROBS: [f64; 4] = [0.02, 0.05, 0.2, 0.8];

/// 200 G(n, p) graphs, n in 1..=200, p cycling through `ER_PROBS`.
pub fn er_corpus() -> Vec<Named> {
    (0..200u64)
        .map(|i| {
            let n = 1 + ((i * 37 + 11) % 200) as u32;
            let p = ER_PROBS[i as usize % 4];
            let spec = GraphSpec::ErdosRenyi {
                n,
                p,
                seed: 1000 + i,
            };
            Named {
                name: format!("er-n{n}-p{p}-s{}", 1000 + i),
                graph: generate_graph(&spec).unwrap(),
            }
        })
        .collect()
}

/// 20 Chung-Lu power-law graphs, n up to 5000.
pub fn chung_lu_corpus() -> Vec<Named> {
    (0..20u64)
        .map(|i| {
            let n = 250 * (i as u32 + 1);
            let exponent = [2.1, 2.5, 3.0][i as usize % 3];
            let avg_degree = [4.0, 8.0, 16.0, 6.0][i as usize % 4];
            let spec = GraphSpec::ChungLu {
                n,
                exponent,
                avg_degree,
                seed: 77 + i,
            };
            Named {
                name: format!("chung-lu-n{n}-e{exponent}-d{avg_degree}"),
                graph: generate_graph(&spec).unwrap(),
            }
        })
        .collect()
}

/// Fixtures plus both random families.
pub fn full_corpus() -> Vec<Named> {
    let mut all = vec![
        Named {
            name: "g1".into(),
            graph: g1(),
        },
        Named {
            name: "p5".into(),
            graph: path(5),
        },
        Named {
            name: "k4".into(),
            graph: complete(4),
        },
        Named {
            name: "star-tail".into(),
            graph: generate_graph(&GraphSpec::StarTail {
                removers: 3,
                m: 1,
                k: 2,
            })
            .unwrap(),
        },
    ];
    all.extend(er_corpus());
    all.extend(chung_lu_corpus());
    all
}

/// Coreness from the definition: `v` has coreness >= k iff it survives
/// repeated deletion of vertices with fewer than k surviving neighbours.
pub fn coreness_by_definition(g: &Graph) -> Vec<u32> {
    let n = g.n();
    let mut core = vec![0u32; n];
    let mut k = 1;
    loop {
        let mut alive = vec![true; n];
        let mut deg: Vec<usize> = g.vertices().map(|v| g.deg(v)).collect();
        let mut queue: VecDeque<VertexId> = g.vertices().filter(|&v| deg[v as usize] < k).collect();
        while let Some(v) = queue.pop_front() {
            if !alive[v as usize] {
                continue;
            }
            alive[v as usize] = false;
            for &u in g.neighbors(v) {
                if alive[u as usize] {
                    deg[u as usize] -= 1;
                    if deg[u as usize] < k {
                        queue.push_back(u);
                    }
                }
            }
        }
        if !alive.iter().any(|&a| a) {
            return core;
        }
        for v in 0..n {
            if alive[v] {
                core[v] = k as u32;
            }
        }
        k += 1;
    }
}

/// Largest h with at least h values >= h, by trying every h.
pub fn h_index_by_definition(values: &[u32]) -> u32 {
    (0..=values.len() as u32)
        .rev()
        .find(|&h| values.iter().filter(|&&x| x >= h).count() as u32 >= h)
        .unwrap()
}

/// Whether level-synchronous peeling ever drives a residual vertex's degree
/// below the current level. Each round removes every residual vertex at or
/// below `k` at once and only then updates the survivors.
pub fn has_under_core_vertex(g: &Graph) -> bool {
    let n = g.n();
    let mut removed: Vec<bool> = g.vertices().map(|v| g.deg(v) == 0).collect();
    let mut deg: Vec<usize> = g.vertices().map(|v| g.deg(v)).collect();
    let mut left = removed.iter().filter(|&&r| !r).count();
    let mut k = 0;
    while left > 0 {
        k += 1;
        loop {
            let round: Vec<usize> = (0..n).filter(|&v| !removed[v] && deg[v] <= k).collect();
            if round.is_empty() {
                break;
            }
            for &v in &round {
                removed[v] = true;
            }
            left -= round.len();
            for &v in &round {
                for &u in g.neighbors(v as VertexId) {
                    let u = u as usize;
                    if !removed[u] {
                        deg[u] -= 1;
                        if deg[u] < k {
                            return true;
                        }
                    }
                }
            }
        }
    }
    false
}

/// Jacobi h-index iteration from the degrees; returns per-vertex change
/// counts.
pub fn h_index_change_counts(g: &Graph) -> Vec<u32> {
    let mut core: Vec<u32> = g.vertices().map(|v| g.deg(v) as u32).collect();
    let mut changes = vec![0u32; g.n()];
    loop {
        let next: Vec<u32> = g
            .vertices()
            .map(|v| {
                let vals: Vec<u32> = g.neighbors(v).iter().map(|&u| core[u as usize]).collect();
                h_index_by_definition(&vals).min(core[v as usize])
            })
            .collect();
        let mut any = false;
        for v in 0..g.n() {
            if next[v] != core[v] {
                changes[v] += 1;
                any = true;
            }
        }
        if !any {
            return changes;
        }
        core = next;
    }
}
