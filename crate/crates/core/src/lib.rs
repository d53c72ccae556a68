//! Sliding-window temporal vertex cover.
//!
//! A temporal graph assigns each edge a set of time slots at which it is
//! active. A `delta`-temporal vertex cover picks vertex appearances `(v, t)`
//! so that every edge is covered, by an endpoint at a time when it is active,
//! inside every window of `delta` consecutive slots in which it appears.

pub mod approx;
pub mod cover;
pub mod error;
pub mod exact_dp;
pub mod fpt;
pub mod graph;
pub mod instances;
pub mod oracle;
pub mod path_algos;
pub mod reduction;

pub use cover::{verify_cover, CoverageReport, Violation};
pub use error::{Error, Result};
pub use graph::{
    EdgeId, PartialBounds, TemporalEdge, TemporalGraph, TemporalVertexSet, Time, Vertex,
    VertexAppearance,
};
