use super::{FrontierQueue, Pool};
use crate::error::Result;
use crate::graph::VertexId;
use crate::metrics::{Recorder, Tally};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepMode {
    /// Ids pushed during a cycle become the next iteration's frontier.
    Synchronous,
    /// Ids pushed during a cycle are drained again within the same
    /// iteration; the iteration ends when a cycle pushes nothing.
    Dynamic,
}

/// One engine's scan/scatter pair.
pub trait Superstep: Sync {
    /// Runs single-threaded at each iteration boundary. `carried` holds the
    /// ids pushed by the last cycle (always empty in dynamic mode). Returns
    /// the next iteration's frontier, or `None` to stop.
    fn scan(&mut self, carried: Vec<VertexId>) -> Option<Vec<VertexId>>;

    /// Processes one frontier vertex; may run concurrently with others.
    fn scatter(&self, v: VertexId, queue: &FrontierQueue, tally: &mut Tally<'_>);

    /// Runs single-threaded after the barrier that ends every drain cycle,
    /// with the cycle's frontier and the ids it pushed.
    fn cycle_end(&mut self, _frontier: &[VertexId], _pushed: &[VertexId]) -> Result<()> {
        Ok(())
    }
}

/// Drives `step` until its scan returns `None`; returns the iteration count.
///
/// Every `Some` frontier from `scan` starts one iteration, even an empty
/// one. A full barrier separates consecutive drain cycles.
pub fn run_supersteps<S: Superstep>(
    pool: &Pool,
    queue: &mut FrontierQueue,
    mode: StepMode,
    step: &mut S,
    rec: &Recorder,
) -> Result<u64> {
    let mut iterations = 0;
    let mut carried = Vec::new();
    while let Some(mut frontier) = step.scan(std::mem::take(&mut carried)) {
        iterations += 1;
        loop {
            if !frontier.is_empty() {
                let shared: &S = step;
                let q: &FrontierQueue = queue;
                pool.for_each(&frontier, rec, |v, t| shared.scatter(v, q, t));
                rec.drain_cycle();
            }
            let pushed = queue.drain();
            step.cycle_end(&frontier, &pushed)?;
            match mode {
                StepMode::Dynamic if !pushed.is_empty() => frontier = pushed,
                _ => {
                    carried = pushed;
                    break;
                }
            }
        }
    }
    Ok(iterations)
}
