//! Pipeline entry points, phantom generation and batch evaluation.

#[cfg(feature = "cli")]
pub mod batch;
pub mod phantom;
pub mod pipeline;

#[cfg(feature = "cli")]
pub use batch::{evaluate_batch, BatchConfig, MetricReport};
pub use phantom::{generate_phantom, Phantom, PhantomSpec};
pub use pipeline::{suppress, suppress_with, Suppression};
