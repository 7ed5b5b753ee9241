//! Exact computation toolkit for subgraph-containment thresholds in `G(n,p)`.
//!
//! The crate counts copies of small patterns, evaluates expectations and
//! sparsity thresholds exactly, checks structural bounds for `q`-sparse
//! hosts, estimates containment thresholds by simulation and searches for
//! hosts that need a large constant `L` in `N(H,F) < E_{Lq} X_F`.

pub mod bitset;
pub mod config;
pub mod counting;
pub mod error;
pub mod exact;
pub mod expectation;
pub mod graph;
pub mod limits;
pub mod montecarlo;
pub mod report;
pub mod search;
pub mod verifier;

pub use error::{Error, Result};
pub use graph::Graph;
pub use limits::Limits;
