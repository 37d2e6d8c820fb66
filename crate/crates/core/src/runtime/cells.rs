use std::sync::atomic::{AtomicI32, Ordering};

use crate::error::{Error, Result};

/// Integer cells with linearizable read-modify-write operations.
///
/// Every RMW returns the value held immediately before it took effect.
pub struct AtomicCellArray {
    cells: Vec<AtomicI32>,
}

impl AtomicCellArray {
    pub fn new(len: usize) -> Self {
        Self::from_values(std::iter::repeat_n(0, len))
    }

    pub fn from_values<I: IntoIterator<Item = i32>>(values: I) -> Self {
        AtomicCellArray {
            cells: values.into_iter().map(AtomicI32::new).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    #[inline]
    pub fn load(&self, i: usize) -> i32 {
        self.cells[i].load(Ordering::Acquire)
    }

    #[inline]
    pub fn store(&self, i: usize, value: i32) {
        self.cells[i].store(value, Ordering::Release)
    }

    #[inline]
    pub fn fetch_add(&self, i: usize, delta: i32) -> i32 {
        self.cells[i].fetch_add(delta, Ordering::AcqRel)
    }

    #[inline]
    pub fn fetch_sub(&self, i: usize, delta: i32) -> i32 {
        self.cells[i].fetch_sub(delta, Ordering::AcqRel)
    }

    /// Atomically replaces `old` with `old - 1` when `old > floor`, otherwise
    /// with `floor`, and returns `old`. Panics if `i` is out of range.
    #[inline]
    pub fn clamped_decrement(&self, i: usize, floor: i32) -> i32 {
        let cell = &self.cells[i];
        let mut old = cell.load(Ordering::Acquire);
        loop {
            let new = if old > floor { old - 1 } else { floor };
            match cell.compare_exchange_weak(old, new, Ordering::AcqRel, Ordering::Acquire) {
                Ok(prev) => return prev,
                Err(actual) => old = actual,
            }
        }
    }

    pub fn try_clamped_decrement(&self, i: usize, floor: i32) -> Result<i32> {
        if i >= self.len() {
            return Err(Error::VertexOutOfRange {
                vertex: i as u64,
                n: self.len(),
            });
        }
        Ok(self.clamped_decrement(i, floor))
    }

    pub fn to_vec(&self) -> Vec<i32> {
        self.cells
            .iter()
            .map(|c| c.load(Ordering::Acquire))
            .collect()
    }
}
