use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, VertexId};
use crate::error::{Error, Result};

/// Synthetic graph models. Output is a pure function of the spec.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    /// G(n, p).
    ErdosRenyi { n: u32, p: f64, seed: u64 },
    /// Chung-Lu graph with power-law expected degrees `~ i^(-1/(exponent-1))`
    /// scaled to the requested average degree.
    ChungLu {
        n: u32,
        exponent: f64,
        avg_degree: f64,
        seed: u64,
    },
    /// A hub whose residual degree is `k + m` at the moment `removers` of its
    /// neighbours (all of coreness `k`) leave the graph in the same round.
    ///
    /// Vertex 0 is the hub, `1..=removers` are the removers. Each remover
    /// hangs off its own `(k+1)`-clique tail through `k-1` edges; when
    /// `k + m > removers` the hub also touches `k + m - removers` vertices of
    /// a `(k+2)`-clique anchor that outlives level `k`.
    StarTail { removers: u32, m: u32, k: u32 },
}

impl GraphSpec {
    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        match *self {
            GraphSpec::ErdosRenyi { p, .. } if !(0.0..=1.0).contains(&p) => {
                bad(format!("edge probability {p} outside [0, 1]"))
            }
            GraphSpec::ChungLu { exponent, .. } if exponent.is_nan() || exponent <= 1.0 => {
                bad(format!("exponent {exponent} must exceed 1"))
            }
            GraphSpec::ChungLu { n, avg_degree, .. }
                if avg_degree.is_nan()
                    || avg_degree <= 0.0
                    || (n > 1 && avg_degree >= (n - 1) as f64) =>
            {
                bad(format!(
                    "average degree {avg_degree} out of range for n={n}"
                ))
            }
            GraphSpec::StarTail { removers, m, k } => {
                if k == 0 {
                    bad("k must be at least 1".into())
                } else if m >= removers {
                    bad(format!("need m < removers (m={m}, removers={removers})"))
                } else if removers > k + m {
                    bad(format!("need removers <= k + m ({removers} > {})", k + m))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

pub fn generate_graph(spec: &GraphSpec) -> Result<Graph> {
    spec.validate()?;
    match *spec {
        GraphSpec::ErdosRenyi { n, p, seed } => erdos_renyi(n, p, seed),
        GraphSpec::ChungLu {
            n,
            exponent,
            avg_degree,
            seed,
        } => chung_lu(n, exponent, avg_degree, seed),
        GraphSpec::StarTail { removers, m, k } => star_tail(removers, m, k),
    }
}

/// Geometric skipping over the lower triangle, O(n + m).
fn erdos_renyi(n: u32, p: f64, seed: u64) -> Result<Graph> {
    let mut edges = Vec::new();
    if p >= 1.0 {
        for v in 1..n {
            edges.extend((0..v).map(|w| (v, w)));
        }
    } else if p > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lp = (1.0 - p).ln();
        let (mut v, mut w): (i64, i64) = (1, -1);
        let n = n as i64;
        while v < n {
            let r: f64 = rng.random();
            w += 1 + ((1.0 - r).ln() / lp).floor() as i64;
            while w >= v && v < n {
                w -= v;
                v += 1;
            }
            if v < n {
                edges.push((v as VertexId, w as VertexId));
            }
        }
    }
    Graph::from_edges(n as usize, edges)
}

fn chung_lu(n: u32, exponent: f64, avg_degree: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Graph::from_edges(n as usize, []);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gamma = 1.0 / (exponent - 1.0);
    let weights: Vec<f64> = (0..n).map(|i| ((i + 1) as f64).powf(-gamma)).collect();
    let dist =
        WeightedIndex::new(&weights).map_err(|e| Error::InvalidSpec(format!("weights: {e}")))?;
    let samples = (n as f64 * avg_degree / 2.0).round() as usize;
    let edges: Vec<(VertexId, VertexId)> = (0..samples)
        .map(|_| {
            (
                dist.sample(&mut rng) as VertexId,
                dist.sample(&mut rng) as VertexId,
            )
        })
        .collect();
    Graph::from_edges(n as usize, edges)
}

fn star_tail(removers: u32, m: u32, k: u32) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut next: VertexId = 1 + removers;
    let mut clique = |size: u32, edges: &mut Vec<(VertexId, VertexId)>| {
        let base = next;
        next += size;
        for a in 0..size {
            for b in a + 1..size {
                edges.push((base + a, base + b));
            }
        }
        base
    };
    for r in 1..=removers {
        edges.push((0, r));
        if k >= 2 {
            let tail = clique(k + 1, &mut edges);
            edges.extend((0..k - 1).map(|i| (r, tail + i)));
        }
    }
    let extra = k + m - removers;
    if extra > 0 {
        let anchor = clique(k + 2, &mut edges);
        edges.extend((0..extra).map(|i| (0, anchor + i)));
    }
    Graph::from_edges(next as usize, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn er_full_probability_is_complete() {
        let g = generate_graph(&GraphSpec::ErdosRenyi {
            n: 4,
            p: 1.0,
            seed: 3,
        })
        .unwrap();
        assert_eq!(g.m(), 6);
        assert_eq!(g.degrees(), vec![3, 3, 3, 3]);
    }

    #[test]
    fn er_is_deterministic_per_seed() {
        let spec = GraphSpec::ErdosRenyi {
            n: 300,
            p: 0.05,
            seed: 42,
        };
        let a = generate_graph(&spec).unwrap();
        assert_eq!(a, generate_graph(&spec).unwrap());
        let other = generate_graph(&GraphSpec::ErdosRenyi {
            n: 300,
            p: 0.05,
            seed: 43,
        })
        .unwrap();
        assert_ne!(a, other);
        a.validate().unwrap();
    }

    #[test]
    fn er_density_is_plausible() {
        let g = generate_graph(&GraphSpec::ErdosRenyi {
            n: 400,
            p: 0.1,
            seed: 1,
        })
        .unwrap();
        let expected = 0.1 * (400.0 * 399.0 / 2.0);
        let m = g.m() as f64;
        assert!((m - expected).abs() < 0.1 * expected, "m = {m}");
    }

    #[test]
    fn chung_lu_is_skewed() {
        let g = generate_graph(&GraphSpec::ChungLu {
            n: 1000,
            exponent: 2.5,
            avg_degree: 8.0,
            seed: 1,
        })
        .unwrap();
        g.validate().unwrap();
        let avg = 2.0 * g.m() as f64 / g.n() as f64;
        assert!(
            g.max_degree() as f64 > avg,
            "max {} avg {avg}",
            g.max_degree()
        );
    }

    #[test]
    fn star_tail_shape() {
        let g = generate_graph(&GraphSpec::StarTail {
            removers: 3,
            m: 1,
            k: 2,
        })
        .unwrap();
        g.validate().unwrap();
        assert_eq!(g.deg(0), 3);
        for r in 1..=3 {
            assert_eq!(g.deg(r), 2);
        }
        // hub + 3 removers + 3 tails of K3
        assert_eq!(g.n(), 13);
    }

    #[test]
    fn star_tail_with_anchor() {
        let g = generate_graph(&GraphSpec::StarTail {
            removers: 3,
            m: 2,
            k: 3,
        })
        .unwrap();
        assert_eq!(g.deg(0), 5);
        g.validate().unwrap();
    }

    #[test]
    fn invalid_specs() {
        for spec in [
            GraphSpec::ErdosRenyi {
                n: 3,
                p: 1.5,
                seed: 0,
            },
            GraphSpec::ChungLu {
                n: 10,
                exponent: 0.5,
                avg_degree: 2.0,
                seed: 0,
            },
            GraphSpec::StarTail {
                removers: 1,
                m: 1,
                k: 2,
            },
            GraphSpec::StarTail {
                removers: 5,
                m: 1,
                k: 2,
            },
            GraphSpec::StarTail {
                removers: 2,
                m: 1,
                k: 0,
            },
        ] {
            assert!(
                matches!(generate_graph(&spec), Err(Error::InvalidSpec(_))),
                "{spec:?}"
            );
        }
    }
}
