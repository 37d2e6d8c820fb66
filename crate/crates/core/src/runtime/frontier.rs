use std::sync::atomic::{AtomicU32, AtomicUsize, Ordering};

use crate::graph::VertexId;

/// Deduplicating work queue over vertex ids `0..n`.
///
/// Concurrent `push` is safe; a vertex is stored at most once between two
/// drains. Membership is an epoch stamp per vertex, so a drain resets every
/// flag in O(1) by bumping the epoch.
pub struct FrontierQueue {
    stamp: Vec<AtomicU32>,
    slots: Vec<AtomicU32>,
    len: AtomicUsize,
    epoch: u32,
}

impl FrontierQueue {
    pub fn new(n: usize) -> Self {
        FrontierQueue {
            stamp: (0..n).map(|_| AtomicU32::new(0)).collect(),
            slots: (0..n).map(|_| AtomicU32::new(0)).collect(),
            len: AtomicUsize::new(0),
            epoch: 1,
        }
    }

    /// Returns `true` if this call inserted `v`.
    #[inline]
    pub fn push(&self, v: VertexId) -> bool {
        let stamp = &self.stamp[v as usize];
        if stamp.load(Ordering::Relaxed) == self.epoch {
            return false;
        }
        if stamp.swap(self.epoch, Ordering::AcqRel) == self.epoch {
            return false;
        }
        let at = self.len.fetch_add(1, Ordering::AcqRel);
        self.slots[at].store(v, Ordering::Release);
        true
    }

    /// Whether `v` was pushed since the last drain.
    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        self.stamp[v as usize].load(Ordering::Acquire) == self.epoch
    }

    pub fn len(&self) -> usize {
        self.len.load(Ordering::Acquire)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Takes everything pushed since the previous drain, in push order.
    pub fn drain(&mut self) -> Vec<VertexId> {
        let len = std::mem::replace(self.len.get_mut(), 0);
        let items = self.slots[..len].iter_mut().map(|s| *s.get_mut()).collect();
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            for s in &mut self.stamp {
                *s.get_mut() = 0;
            }
            self.epoch = 1;
        }
        items
    }
}
