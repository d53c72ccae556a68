//! Temporal graphs, vertex appearances and sliding time windows.
//!
//! Vertices are `0..n`. Time slots are 1-based: the lifetime is `[1, T]` and
//! the window with index `i` is `W_i = [i, i + delta - 1]` for
//! `1 <= i <= T - delta + 1`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type Time = usize;
pub type EdgeId = usize;

/// An undirected edge of the underlying graph with its sorted activity times.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TemporalEdge {
    pub u: Vertex,
    pub v: Vertex,
    pub labels: Vec<Time>,
}

impl TemporalEdge {
    pub fn new(u: Vertex, v: Vertex, labels: Vec<Time>) -> Self {
        TemporalEdge { u, v, labels }
    }

    pub fn has_endpoint(&self, w: Vertex) -> bool {
        self.u == w || self.v == w
    }

    pub fn other(&self, w: Vertex) -> Vertex {
        if self.u == w {
            self.v
        } else {
            self.u
        }
    }

    pub fn is_active(&self, t: Time) -> bool {
        self.labels.binary_search(&t).is_ok()
    }

    /// Labels falling in `[from, to]`.
    pub fn labels_between(&self, from: Time, to: Time) -> &[Time] {
        let lo = self.labels.partition_point(|&x| x < from);
        let hi = self.labels.partition_point(|&x| x <= to);
        &self.labels[lo..hi.max(lo)]
    }

    fn key(&self) -> (Vertex, Vertex) {
        (self.u.min(self.v), self.u.max(self.v))
    }
}

/// A temporal graph `(G, lambda)`.
///
/// The lifetime is the largest label unless a longer nominal lifetime was
/// declared; the extra slots at the end carry no labels but still form
/// windows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalGraph {
    n: usize,
    edges: Vec<TemporalEdge>,
    lifetime: Time,
    incidence: Vec<Vec<EdgeId>>,
}

impl TemporalGraph {
    pub fn new(n: usize, edges: Vec<TemporalEdge>) -> Result<Self> {
        Self::build(n, edges, None)
    }

    /// Builds a graph whose lifetime is at least `lifetime`.
    pub fn with_lifetime(n: usize, edges: Vec<TemporalEdge>, lifetime: Time) -> Result<Self> {
        Self::build(n, edges, Some(lifetime))
    }

    fn build(n: usize, edges: Vec<TemporalEdge>, declared: Option<Time>) -> Result<Self> {
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        let mut incidence = vec![Vec::new(); n];
        let mut max_label = 0;
        for (index, e) in edges.iter().enumerate() {
            for w in [e.u, e.v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if e.u == e.v {
                return Err(Error::SelfLoop { index, vertex: e.u });
            }
            if !seen.insert(e.key()) {
                return Err(Error::DuplicateEdge { index, u: e.u, v: e.v });
            }
            if e.labels.is_empty() {
                return Err(Error::EmptyLabels { index });
            }
            if e.labels[0] == 0 || e.labels.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::BadLabels { index });
            }
            max_label = max_label.max(*e.labels.last().unwrap());
            incidence[e.u].push(index);
            incidence[e.v].push(index);
        }
        let lifetime = match declared {
            Some(d) if d < max_label => {
                return Err(Error::LifetimeTooSmall { declared: d, max_label })
            }
            Some(d) => d,
            None => max_label,
        };
        Ok(TemporalGraph { n, edges, lifetime, incidence })
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[TemporalEdge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &TemporalEdge {
        &self.edges[e]
    }

    /// Lifetime `T`, including any declared trailing inactive slots.
    pub fn lifetime(&self) -> Time {
        self.lifetime
    }

    /// Largest label over all edges (0 for an edgeless graph).
    pub fn max_label(&self) -> Time {
        self.edges.iter().filter_map(|e| e.labels.last().copied()).max().unwrap_or(0)
    }

    /// Edges incident to `v`, in edge-index order.
    pub fn incident(&self, v: Vertex) -> &[EdgeId] {
        &self.incidence[v]
    }

    pub fn total_time_edges(&self) -> usize {
        self.edges.iter().map(|e| e.labels.len()).sum()
    }

    /// Same edges, lifetime extended to `lifetime`.
    pub fn extended_to(&self, lifetime: Time) -> Result<Self> {
        TemporalGraph::with_lifetime(self.n, self.edges.clone(), lifetime.max(self.lifetime))
    }

    /// Number of `delta`-windows, `T - delta + 1`, or 0 when `delta > T`.
    pub fn window_count(&self, delta: Time) -> usize {
        (self.lifetime + 1).saturating_sub(delta)
    }

    /// Rejects `delta == 0` and, for graphs with edges, `delta > T`.
    pub fn check_delta(&self, delta: Time) -> Result<()> {
        if delta == 0 {
            return Err(Error::ZeroDelta);
        }
        if delta > self.lifetime && !self.edges.is_empty() {
            return Err(Error::DeltaExceedsLifetime { delta, lifetime: self.lifetime });
        }
        Ok(())
    }

    /// Edges active at time `t`.
    pub fn snapshot(&self, t: Time) -> Result<Vec<EdgeId>> {
        if t == 0 || t > self.lifetime {
            return Err(Error::TimeOutOfRange { t, lifetime: self.lifetime });
        }
        Ok((0..self.edges.len()).filter(|&e| self.edges[e].is_active(t)).collect())
    }

    /// Edges with at least one label inside window `W_i`.
    pub fn edges_in_window(&self, delta: Time, i: usize) -> Result<Vec<EdgeId>> {
        self.check_window(delta, i)?;
        Ok((0..self.edges.len())
            .filter(|&e| !self.edges[e].labels_between(i, i + delta - 1).is_empty())
            .collect())
    }

    pub fn check_window(&self, delta: Time, i: usize) -> Result<()> {
        self.check_delta(delta)?;
        let max = self.window_count(delta);
        if i == 0 || i > max {
            return Err(Error::WindowOutOfRange { index: i, max });
        }
        Ok(())
    }

    /// Maximum vertex degree over all snapshots.
    pub fn max_snapshot_degree(&self) -> usize {
        let mut best = 0;
        for v in 0..self.n {
            let mut times: Vec<Time> = self.incidence[v]
                .iter()
                .flat_map(|&e| self.edges[e].labels.iter().copied())
                .collect();
            times.sort_unstable();
            for run in times.chunk_by(|a, b| a == b) {
                best = best.max(run.len());
            }
        }
        best
    }

    /// Maximum degree of the underlying static graph.
    pub fn underlying_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Every appearance `(v, t)` with `v` incident to an edge active at `t`.
    pub fn all_active_appearances(&self) -> TemporalVertexSet {
        self.edges
            .iter()
            .flat_map(|e| e.labels.iter().flat_map(move |&t| [VertexAppearance::new(e.u, t), VertexAppearance::new(e.v, t)]))
            .collect()
    }
}

/// The appearance of vertex `vertex` at time `time`.
///
/// Ordered by time first, then vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexAppearance {
    pub vertex: Vertex,
    pub time: Time,
}

impl VertexAppearance {
    pub fn new(vertex: Vertex, time: Time) -> Self {
        VertexAppearance { vertex, time }
    }
}

impl Ord for VertexAppearance {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.time, self.vertex).cmp(&(other.time, other.vertex))
    }
}

impl PartialOrd for VertexAppearance {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VertexAppearance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.vertex, self.time)
    }
}

/// A set of vertex appearances.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TemporalVertexSet {
    appearances: BTreeSet<VertexAppearance>,
}

impl TemporalVertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.appearances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.appearances.is_empty()
    }

    pub fn insert(&mut self, a: VertexAppearance) -> bool {
        self.appearances.insert(a)
    }

    pub fn remove(&mut self, a: &VertexAppearance) -> bool {
        self.appearances.remove(a)
    }

    pub fn contains(&self, a: &VertexAppearance) -> bool {
        self.appearances.contains(a)
    }

    pub fn iter(&self) -> impl Iterator<Item = &VertexAppearance> + '_ {
        self.appearances.iter()
    }

    pub fn union_with(&mut self, other: &TemporalVertexSet) {
        self.appearances.extend(other.appearances.iter().copied());
    }

    pub fn is_subset(&self, other: &TemporalVertexSet) -> bool {
        self.appearances.is_subset(&other.appearances)
    }

    /// Appearances as a vector, ordered by `(t, v)`.
    pub fn to_vec(&self) -> Vec<VertexAppearance> {
        self.appearances.iter().copied().collect()
    }
}

impl FromIterator<VertexAppearance> for TemporalVertexSet {
    fn from_iter<I: IntoIterator<Item = VertexAppearance>>(iter: I) -> Self {
        TemporalVertexSet { appearances: iter.into_iter().collect() }
    }
}

impl Extend<VertexAppearance> for TemporalVertexSet {
    fn extend<I: IntoIterator<Item = VertexAppearance>>(&mut self, iter: I) {
        self.appearances.extend(iter)
    }
}

impl IntoIterator for TemporalVertexSet {
    type Item = VertexAppearance;
    type IntoIter = std::collections::btree_set::IntoIter<VertexAppearance>;
    fn into_iter(self) -> Self::IntoIter {
        self.appearances.into_iter()
    }
}

impl<'a> IntoIterator for &'a TemporalVertexSet {
    type Item = &'a VertexAppearance;
    type IntoIter = std::collections::btree_set::Iter<'a, VertexAppearance>;
    fn into_iter(self) -> Self::IntoIter {
        self.appearances.iter()
    }
}

/// Per-edge lowest and highest window indices that must be covered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialBounds {
    bounds: Vec<(usize, usize)>,
}

impl PartialBounds {
    /// Every edge obligated in every window `1..=T-delta+1`.
    pub fn full(g: &TemporalGraph, delta: Time) -> Result<Self> {
        g.check_delta(delta)?;
        let w = g.window_count(delta);
        Ok(PartialBounds { bounds: vec![(1, w); g.num_edges()] })
    }

    pub fn new(g: &TemporalGraph, delta: Time, bounds: Vec<(usize, usize)>) -> Result<Self> {
        let b = PartialBounds { bounds };
        b.validate(g, delta)?;
        Ok(b)
    }

    pub fn validate(&self, g: &TemporalGraph, delta: Time) -> Result<()> {
        g.check_delta(delta)?;
        if self.bounds.len() != g.num_edges() {
            return Err(Error::BoundsLength { got: self.bounds.len(), expected: g.num_edges() });
        }
        let max = g.window_count(delta);
        for (edge, &(low, high)) in self.bounds.iter().enumerate() {
            if low == 0 || low > high || high > max {
                return Err(Error::InvalidBounds { edge, low, high, max });
            }
        }
        Ok(())
    }

    pub fn get(&self, e: EdgeId) -> (usize, usize) {
        self.bounds[e]
    }

    pub fn set(&mut self, e: EdgeId, low: usize, high: usize) {
        self.bounds[e] = (low, high);
    }

    pub fn as_slice(&self) -> &[(usize, usize)] {
        &self.bounds
    }

    pub fn len(&self) -> usize {
        self.bounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }
}
