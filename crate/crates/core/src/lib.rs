//! Influence maximization on directed graphs under the Independent Cascade
//! Model.
//!
//! * [`aapc`]: step-indexed activation probabilities, the spread estimate
//!   built on them, greedy selection, and the steady-state baseline.
//! * [`eaapc`]: level-bounded BFS propagation and its greedy selector.
//! * [`baselines`]: Monte-Carlo greedy with CELF, top degree.
//! * [`oracle`]: Monte-Carlo cascades and exact live-edge enumeration.
//! * [`harness`]: fixtures, experiment runner and report writers.

pub mod aapc;
pub mod baselines;
mod celf;
pub mod eaapc;
pub mod error;
pub mod graph;
pub mod harness;
pub mod oracle;
pub mod selection;

pub use error::{Error, Result};
pub use graph::{Graph, LoadOptions, VertexId};
pub use selection::{Algorithm, SeedSelectionResult, SelectionConfig};
