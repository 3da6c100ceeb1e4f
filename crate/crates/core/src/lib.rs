//! Influence maximization on directed social graphs with exact one- and
//! two-hop influence estimation.
//!
//! The pieces, bottom up:
//!
//! - [`graph`]: CSR graphs, edge-list loading and probability models
//!   (weighted cascade, TRIVALENCY, uniform).
//! - [`hop`]: incremental one-/two-hop activation probabilities under the
//!   independent cascade and linear threshold models.
//! - [`bounds`]: single-seed upper bounds used to start lazy greedy.
//! - [`selection`]: CELF greedy plus HighDegree and DegreeDiscount.
//! - [`oracle`]: Monte-Carlo and exhaustive live-edge spread.
//! - [`analysis`]: approximation guarantees on scale-free graphs.
//! - [`generate`]: synthetic power-law graphs.
//! - [`cli`]: the `hopim` command-line front end.

pub mod analysis;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod generate;
pub mod graph;
pub mod hop;
pub mod oracle;
pub mod selection;

pub use error::{Error, Result};
pub use graph::{Graph, NodeId, WeightKind, WeightModel};
pub use hop::{Diffusion, GainReport, HopState, Hops};
pub use oracle::SpreadEstimate;
pub use selection::{Bootstrap, HopConfig, SeedResult};
