use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rayon::{ThreadPool, ThreadPoolBuilder};

use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::metrics::{Recorder, Tally};

pub const DEFAULT_CHUNK: usize = 64;

/// Fixed set of workers that split a batch into `chunk`-sized pieces claimed
/// through a shared cursor. Batches no larger than one chunk run inline on
/// the calling thread.
pub struct Pool {
    workers: usize,
    chunk: usize,
    threads: Option<ThreadPool>,
}

impl Pool {
    pub fn new(workers: usize) -> Result<Self> {
        Self::with_chunk(workers, DEFAULT_CHUNK)
    }

    pub fn with_chunk(workers: usize, chunk: usize) -> Result<Self> {
        if workers == 0 {
            return Err(Error::InvalidSpec("worker count must be at least 1".into()));
        }
        if chunk == 0 {
            return Err(Error::InvalidSpec("chunk size must be at least 1".into()));
        }
        let threads = if workers > 1 {
            Some(
                ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .thread_name(|i| format!("kcore-worker-{i}"))
                    .build()
                    .map_err(|e| Error::InvalidSpec(format!("thread pool: {e}")))?,
            )
        } else {
            None
        };
        Ok(Pool {
            workers,
            chunk,
            threads,
        })
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn chunk(&self) -> usize {
        self.chunk
    }

    /// Runs `body(chunk_index, range)` for every chunk of `0..len`, in
    /// parallel, returning once all chunks are done.
    fn run_chunks<F>(&self, len: usize, body: F)
    where
        F: Fn(usize, std::ops::Range<usize>) + Sync,
    {
        let chunks = len.div_ceil(self.chunk);
        match &self.threads {
            Some(threads) if chunks > 1 => {
                let cursor = AtomicUsize::new(0);
                threads.broadcast(|_| loop {
                    let c = cursor.fetch_add(1, Ordering::Relaxed);
                    if c >= chunks {
                        break;
                    }
                    let start = c * self.chunk;
                    body(c, start..(start + self.chunk).min(len));
                });
            }
            _ => {
                for c in 0..chunks {
                    let start = c * self.chunk;
                    body(c, start..(start + self.chunk).min(len));
                }
            }
        }
    }

    /// Applies `f` to every item; each chunk's tally is flushed into `rec`.
    pub fn for_each<F>(&self, items: &[VertexId], rec: &Recorder, f: F)
    where
        F: Fn(VertexId, &mut Tally<'_>) + Sync,
    {
        self.run_chunks(items.len(), |_, range| {
            let mut t = rec.tally();
            for &v in &items[range] {
                f(v, &mut t);
            }
            rec.absorb(t);
        });
    }

    /// Parallel filter-map; output keeps the order of `items`.
    pub fn filter_map<T, F>(&self, items: &[VertexId], rec: &Recorder, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(VertexId, &mut Tally<'_>) -> Option<T> + Sync,
    {
        let parts = Mutex::new(Vec::new());
        self.run_chunks(items.len(), |c, range| {
            let mut t = rec.tally();
            let out: Vec<T> = items[range].iter().filter_map(|&v| f(v, &mut t)).collect();
            rec.absorb(t);
            if !out.is_empty() {
                parts.lock().unwrap().push((c, out));
            }
        });
        let mut parts = parts.into_inner().unwrap();
        parts.sort_unstable_by_key(|&(c, _)| c);
        parts.into_iter().flat_map(|(_, out)| out).collect()
    }

    /// Ascending ids in `0..n` satisfying `pred`.
    pub fn select<F>(&self, n: usize, pred: F) -> Vec<VertexId>
    where
        F: Fn(VertexId) -> bool + Sync,
    {
        let parts = Mutex::new(Vec::new());
        // scans are cheap per item; use wider chunks than the scatter phase
        let wide = self.chunk * 16;
        let chunks = n.div_ceil(wide);
        self.run_chunks(chunks, |_, range| {
            for c in range {
                let start = c * wide;
                let out: Vec<VertexId> = (start..(start + wide).min(n))
                    .map(|v| v as VertexId)
                    .filter(|&v| pred(v))
                    .collect();
                if !out.is_empty() {
                    parts.lock().unwrap().push((c, out));
                }
            }
        });
        let mut parts = parts.into_inner().unwrap();
        parts.sort_unstable_by_key(|&(c, _)| c);
        parts.into_iter().flat_map(|(_, out)| out).collect()
    }
}
