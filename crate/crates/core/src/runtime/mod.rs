//! Shared-memory execution: atomic cells, deduplicating frontiers, a
//! chunked worker pool, and the barrier-separated superstep driver.

mod cells;
mod frontier;
mod pool;
mod superstep;

pub use cells::AtomicCellArray;
pub use frontier::FrontierQueue;
pub use pool::{Pool, DEFAULT_CHUNK};
pub use superstep::{run_supersteps, StepMode, Superstep};
