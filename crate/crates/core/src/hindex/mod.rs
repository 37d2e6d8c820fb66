//! Top-down decomposition: start every estimate at the degree and lower it
//! to the h-index of the neighbours' estimates until nothing changes.
//!
//! All three engines iterate synchronously: a superstep reads only values
//! committed before it began.

mod histo;
mod iterate;

use std::cell::RefCell;

pub use histo::{histo_core, init_histo, HistogramStore};
pub use iterate::{cnt_core, nbr_core};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// Largest `h` such that at least `h` of `values` are `>= h`.
pub fn h_index(values: &[u32]) -> u32 {
    let mut scratch = Vec::new();
    h_index_capped(values.iter().copied(), values.len() as u32, &mut scratch)
}

/// `min(cap, h_index(values))` in O(len + cap) using `scratch` for counts.
pub(crate) fn h_index_capped<I>(values: I, cap: u32, scratch: &mut Vec<u32>) -> u32
where
    I: Iterator<Item = u32>,
{
    let cap = cap as usize;
    scratch.clear();
    scratch.resize(cap + 1, 0);
    for x in values {
        scratch[(x as usize).min(cap)] += 1;
    }
    let mut at_least = 0;
    for h in (1..=cap).rev() {
        at_least += scratch[h];
        if at_least as usize >= h {
            return h as u32;
        }
    }
    0
}

thread_local! {
    static SCRATCH: RefCell<Vec<u32>> = const { RefCell::new(Vec::new()) };
}

/// h-index of `v`'s neighbour estimates, never above `core[v]`.
pub(crate) fn neighbor_h_index(nbrs: &[VertexId], core: impl Fn(VertexId) -> u32, cap: u32) -> u32 {
    let cap = cap.min(nbrs.len() as u32);
    SCRATCH.with(|s| h_index_capped(nbrs.iter().map(|&u| core(u)), cap, &mut s.borrow_mut()))
}

/// Number of `v`'s neighbours whose estimate is at least `core[v]`.
pub fn compute_cnt(g: &Graph, core: &[u32], v: usize) -> Result<usize> {
    if v >= g.n() {
        return Err(Error::VertexOutOfRange {
            vertex: v as u64,
            n: g.n(),
        });
    }
    let own = core[v];
    Ok(g.neighbors(v as VertexId)
        .iter()
        .filter(|&&u| core[u as usize] >= own)
        .count())
}

/// Debug sweep: the vertices whose estimate would drop under one more
/// h-index step are exactly those flagged in `selected`.
pub(crate) fn check_frontier_precision(
    g: &Graph,
    core: &[u32],
    selected: &[bool],
    algorithm: &'static str,
) -> Result<()> {
    for v in g.vertices() {
        let c = core[v as usize];
        if c == 0 {
            continue;
        }
        let h = neighbor_h_index(g.neighbors(v), |u| core[u as usize], c);
        let drops = h < c;
        if drops != selected[v as usize] {
            return Err(Error::InvariantViolation {
                algorithm,
                detail: if drops {
                    format!("vertex {v} would drop {c} -> {h} but was not selected")
                } else {
                    format!("vertex {v} selected but its estimate {c} would not drop")
                },
            });
        }
    }
    Ok(())
}

/// Debug sweep: `truth <= current <= previous` everywhere.
pub(crate) fn check_monotone_bound(
    truth: &[u32],
    previous: &[u32],
    current: &[u32],
    algorithm: &'static str,
) -> Result<()> {
    for (v, ((&t, &p), &c)) in truth.iter().zip(previous).zip(current).enumerate() {
        if !(t <= c && c <= p) {
            return Err(Error::InvariantViolation {
                algorithm,
                detail: format!("vertex {v}: expected {t} <= {c} <= {p}"),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use proptest::prelude::*;

    /// Straight from the definition: try every candidate h.
    fn brute_h(values: &[u32]) -> u32 {
        (0..=values.len() as u32)
            .filter(|&h| values.iter().filter(|&&x| x >= h).count() as u32 >= h)
            .max()
            .unwrap()
    }

    #[test]
    fn known_values() {
        assert_eq!(h_index(&[1, 1, 2, 3, 2]), 2);
        assert_eq!(h_index(&[]), 0);
        assert_eq!(h_index(&[5, 5, 5, 5, 5]), 5);
        assert_eq!(h_index(&[3, 3, 3]), 3);
        assert_eq!(h_index(&[0, 0]), 0);
        assert_eq!(h_index(&[100]), 1);
    }

    proptest! {
        #[test]
        fn matches_definition(values in prop::collection::vec(0u32..=64, 0..=64)) {
            let h = h_index(&values);
            prop_assert_eq!(h, brute_h(&values));
            // both defining conditions
            prop_assert!(values.iter().filter(|&&x| x >= h).count() as u32 >= h);
            prop_assert!(values.iter().filter(|&&x| x > h).count() as u32 <= h);
        }

        #[test]
        fn capping_is_min(values in prop::collection::vec(0u32..=40, 0..=40), cap in 0u32..50) {
            let mut s = Vec::new();
            prop_assert_eq!(
                h_index_capped(values.iter().copied(), cap, &mut s),
                brute_h(&values).min(cap)
            );
        }
    }

    #[test]
    fn cnt_on_g1_initial_estimates() {
        let g = g1();
        let deg = g.degrees();
        assert_eq!(compute_cnt(&g, &deg, 5).unwrap(), 0);
        assert_eq!(compute_cnt(&g, &deg, 2).unwrap(), 2);
        assert_eq!(compute_cnt(&g, &deg, 3).unwrap(), 1);
        assert!(compute_cnt(&g, &deg, 6).is_err());
    }

    #[test]
    fn cnt_equal_neighbours_is_degree() {
        let g = complete(5);
        assert_eq!(compute_cnt(&g, &[4; 5], 2).unwrap(), 4);
    }
}
