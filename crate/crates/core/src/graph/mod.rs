//! Undirected simple graphs in compressed-sparse-row form.
//!
//! Every graph handed to an engine has been normalized: no self-loops, no
//! duplicate neighbours, both directions of each edge stored, and every
//! neighbour list sorted ascending. Vertex ids are dense `0..n`; the labels
//! they were read under are kept alongside so results can be written back
//! in the caller's numbering.

mod generate;
mod io;

use std::ops::Range;

pub use generate::{generate_graph, GraphSpec};
pub use io::{load_graph, read_coreness, write_coreness, write_edge_list, Format};

use crate::error::{Error, Result};

pub type VertexId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<u64>,
    adjacency: Vec<VertexId>,
    labels: Vec<u64>,
}

impl Graph {
    /// Builds a normalized graph on `n` vertices labelled `0..n`.
    ///
    /// Self-loops are dropped, duplicates and reversed pairs merged.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        Self::from_labelled_edges((0..n as u64).collect(), edges)
    }

    /// Like [`Graph::from_edges`] with caller-supplied labels; `labels.len()`
    /// fixes the vertex count.
    pub fn from_labelled_edges<I>(labels: Vec<u64>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let n = labels.len();
        if n > VertexId::MAX as usize {
            return Err(Error::InvalidSpec(format!(
                "{n} vertices exceed the 32-bit id space"
            )));
        }
        let mut pairs: Vec<(VertexId, VertexId)> = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w as usize >= n {
                    return Err(Error::VertexOutOfRange {
                        vertex: w as u64,
                        n,
                    });
                }
            }
            if u != v {
                pairs.push((u, v));
                pairs.push((v, u));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();

        let mut offsets = vec![0u64; n + 1];
        for &(u, _) in &pairs {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let adjacency: Vec<VertexId> = pairs.into_iter().map(|(_, v)| v).collect();

        let g = Graph {
            offsets,
            adjacency,
            labels,
        };
        if g.max_degree() > i32::MAX as usize {
            return Err(Error::InvalidSpec(
                "maximum degree exceeds the 31-bit cell range".into(),
            ));
        }
        Ok(g)
    }

    pub fn empty() -> Self {
        Graph {
            offsets: vec![0],
            adjacency: Vec::new(),
            labels: Vec::new(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Undirected edge count.
    #[inline]
    pub fn m(&self) -> usize {
        self.adjacency.len() / 2
    }

    /// Degree of `v`, checked.
    pub fn degree(&self, v: usize) -> Result<usize> {
        if v >= self.n() {
            return Err(Error::VertexOutOfRange {
                vertex: v as u64,
                n: self.n(),
            });
        }
        Ok(self.deg(v as VertexId))
    }

    /// Degree of `v`. Panics when `v >= n`.
    #[inline]
    pub fn deg(&self, v: VertexId) -> usize {
        let v = v as usize;
        (self.offsets[v + 1] - self.offsets[v]) as usize
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[self.edge_range(v)]
    }

    /// Positions of `v`'s entries in [`Graph::adjacency`].
    #[inline]
    pub fn edge_range(&self, v: VertexId) -> Range<usize> {
        let v = v as usize;
        self.offsets[v] as usize..self.offsets[v + 1] as usize
    }

    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    pub fn adjacency(&self) -> &[VertexId] {
        &self.adjacency
    }

    /// Original label of every dense id, i.e. the remap table.
    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> u64 {
        self.labels[v as usize]
    }

    pub fn vertices(&self) -> Range<VertexId> {
        0..self.n() as VertexId
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.vertices().map(|v| self.deg(v) as u32).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.deg(v)).max().unwrap_or(0)
    }

    /// Exhaustive structural check of the CSR invariants.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.n();
        if self.offsets.len() != n + 1 || self.offsets[0] != 0 {
            return Err("offsets must have length n+1 and start at 0".into());
        }
        if self.offsets[n] as usize != self.adjacency.len()
            || !self.adjacency.len().is_multiple_of(2)
        {
            return Err("offsets[n] must equal 2m".into());
        }
        if self.offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err("offsets must be nondecreasing".into());
        }
        for v in self.vertices() {
            let nbrs = self.neighbors(v);
            if nbrs.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("neighbour list of {v} not strictly ascending"));
            }
            for &u in nbrs {
                if u == v {
                    return Err(format!("self-loop at {v}"));
                }
                if (u as usize) >= n || self.neighbors(u).binary_search(&v).is_err() {
                    return Err(format!("edge {v}->{u} has no reverse"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Six-vertex example graph with coreness [1,1,2,2,2,2].
    pub const G1_EDGES: &str = "0 5\n1 5\n2 3\n2 5\n3 4\n3 5\n4 5";

    /// G1 with dense ids equal to its labels.
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

    pub fn cycle(n: u32) -> Graph {
        Graph::from_edges(n as usize, (0..n).map(|v| (v, (v + 1) % n))).unwrap()
    }

    pub fn complete(n: u32) -> Graph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_edges(n as usize, edges).unwrap()
    }

    pub fn star(leaves: u32) -> Graph {
        Graph::from_edges(leaves as usize + 1, (1..=leaves).map(|v| (0, v))).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn g1_degrees() {
        let g = g1();
        assert_eq!(g.n(), 6);
        assert_eq!(g.m(), 7);
        assert_eq!(g.degrees(), vec![1, 1, 2, 3, 2, 5]);
        assert_eq!(g.degree(5).unwrap(), 5);
        assert_eq!(g.degree(0).unwrap(), 1);
        g.validate().unwrap();
    }

    #[test]
    fn degree_out_of_range() {
        let g = g1();
        assert!(matches!(
            g.degree(6),
            Err(Error::VertexOutOfRange { vertex: 6, n: 6 })
        ));
    }

    #[test]
    fn isolated_vertex_has_degree_zero() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(g.degree(2).unwrap(), 0);
        assert!(g.neighbors(2).is_empty());
    }

    #[test]
    fn normalization_merges_and_drops() {
        let g = Graph::from_edges(3, [(0, 0), (1, 0), (0, 1), (2, 1), (1, 2)]).unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
        g.validate().unwrap();
    }

    #[test]
    fn rejects_unknown_endpoint() {
        assert!(Graph::from_edges(2, [(0, 2)]).is_err());
    }
}
