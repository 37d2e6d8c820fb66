//! k-core decomposition: serial and parallel peeling, h-index iteration,
//! and the instrumentation used to compare them.

pub mod engine;
pub mod error;
pub mod graph;
pub mod hindex;
pub mod metrics;
pub mod peel;
pub mod runtime;

pub use engine::{decompose, first_mismatch, Algorithm, CoreResult, Options};
pub use error::{Error, Result};
pub use graph::{generate_graph, load_graph, Format, Graph, GraphSpec, VertexId};
pub use metrics::{Metrics, MetricsFormat, MetricsRecord, TraceCounts};
