use thiserror::Error;

use crate::graph::{Time, Vertex};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("edge {index} is a self-loop on vertex {vertex}")]
    SelfLoop { index: usize, vertex: Vertex },
    #[error("edge {index} duplicates the undirected edge {u}-{v}")]
    DuplicateEdge { index: usize, u: Vertex, v: Vertex },
    #[error("edge {index} has no time labels")]
    EmptyLabels { index: usize },
    #[error("edge {index}: time labels must be >= 1 and strictly increasing")]
    BadLabels { index: usize },
    #[error("declared lifetime {declared} is smaller than the largest label {max_label}")]
    LifetimeTooSmall { declared: Time, max_label: Time },
    #[error("time {t} is outside the lifetime [1, {lifetime}]")]
    TimeOutOfRange { t: Time, lifetime: Time },
    #[error("window length must be at least 1")]
    ZeroDelta,
    #[error("window length {delta} exceeds the lifetime {lifetime}")]
    DeltaExceedsLifetime { delta: Time, lifetime: Time },
    #[error("window index {index} outside [1, {max}]")]
    WindowOutOfRange { index: usize, max: usize },
    #[error("edge index {index} out of range ({m} edges)")]
    EdgeOutOfRange { index: usize, m: usize },
    #[error("bounds for edge {edge} are invalid: need 1 <= {low} <= {high} <= {max}")]
    InvalidBounds { edge: usize, low: usize, high: usize, max: usize },
    #[error("bounds cover {got} edges but the graph has {expected}")]
    BoundsLength { got: usize, expected: usize },
    #[error("appearance ({vertex}, {t}) lies outside the graph")]
    AppearanceOutOfRange { vertex: Vertex, t: Time },
    #[error("vertex {vertex} is not an endpoint of edge {edge}")]
    NotAnEndpoint { vertex: Vertex, edge: usize },
    #[error("underlying graph is not a {expected}")]
    Topology { expected: &'static str },
    #[error("oracle refused: {candidates} candidate appearances exceed the guard of {guard}")]
    OracleTooLarge { candidates: usize, guard: usize },
    #[error("search budget of {budget} nodes exhausted")]
    Timeout { budget: u64 },
    #[error("dynamic program exceeded its state guard of {guard} states")]
    StateSpace { guard: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("generation failed: {0}")]
    Generation(String),
    #[error("formula error: {0}")]
    Formula(String),
    #[error("layout error: {0}")]
    Layout(String),
    #[error("invalid input: {0}")]
    Input(String),
}
