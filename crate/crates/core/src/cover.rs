//! Cover verification.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, PartialBounds, TemporalEdge, TemporalGraph, TemporalVertexSet, Time};

/// An edge left uncovered in a window where it is obligated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Violation {
    pub window: usize,
    pub edge: EdgeId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub valid: bool,
    /// Sorted by window, then edge.
    pub violations: Vec<Violation>,
}

/// Windows in `[lo, hi]` in which `edge` has a label, ascending.
pub fn obligated_windows(edge: &TemporalEdge, delta: Time, lo: usize, hi: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut next = lo;
    for &t in &edge.labels {
        let from = (t + 1).saturating_sub(delta).max(next).max(1);
        let to = t.min(hi);
        if from <= to {
            out.extend(from..=to);
            next = to + 1;
        }
        if t >= hi {
            break;
        }
    }
    out
}

/// Every `(window, edge)` obligation, sorted by window then edge.
pub fn obligations(g: &TemporalGraph, delta: Time, bounds: &PartialBounds) -> Vec<Violation> {
    let mut out: Vec<Violation> = (0..g.num_edges())
        .flat_map(|e| {
            let (lo, hi) = bounds.get(e);
            obligated_windows(g.edge(e), delta, lo, hi)
                .into_iter()
                .map(move |window| Violation { window, edge: e })
        })
        .collect();
    out.sort_unstable();
    out
}

/// Per edge, the labels at which an endpoint of the edge is in `cover`.
pub fn covered_times(g: &TemporalGraph, cover: &TemporalVertexSet) -> Result<Vec<Vec<Time>>> {
    let mut by_vertex: Vec<Vec<Time>> = vec![Vec::new(); g.num_vertices()];
    for a in cover {
        if a.vertex >= g.num_vertices() || a.time == 0 || a.time > g.lifetime() {
            return Err(Error::AppearanceOutOfRange { vertex: a.vertex, t: a.time });
        }
        by_vertex[a.vertex].push(a.time);
    }
    for times in &mut by_vertex {
        times.sort_unstable();
    }
    Ok(g.edges()
        .iter()
        .map(|e| {
            e.labels
                .iter()
                .copied()
                .filter(|t| by_vertex[e.u].binary_search(t).is_ok() || by_vertex[e.v].binary_search(t).is_ok())
                .collect()
        })
        .collect())
}

/// Checks that `cover` covers every edge in every window where it appears,
/// restricted to the windows `[l(e), h(e)]` when `bounds` is given.
pub fn verify_cover(
    g: &TemporalGraph,
    delta: Time,
    cover: &TemporalVertexSet,
    bounds: Option<&PartialBounds>,
) -> Result<CoverageReport> {
    g.check_delta(delta)?;
    if let Some(b) = bounds {
        b.validate(g, delta)?;
    }
    let covered = covered_times(g, cover)?;
    let windows = g.window_count(delta);
    let mut violations = Vec::new();
    for (e, edge) in g.edges().iter().enumerate() {
        let (lo, hi) = bounds.map_or((1, windows), |b| b.get(e));
        let k = &covered[e];
        let mut p = 0;
        for i in obligated_windows(edge, delta, lo, hi) {
            while p < k.len() && k[p] < i {
                p += 1;
            }
            if p == k.len() || k[p] > i + delta - 1 {
                violations.push(Violation { window: i, edge: e });
            }
        }
    }
    violations.sort_unstable();
    Ok(CoverageReport { valid: violations.is_empty(), violations })
}

/// Shorthand for `verify_cover(..)?.valid`.
pub fn is_cover(
    g: &TemporalGraph,
    delta: Time,
    cover: &TemporalVertexSet,
    bounds: Option<&PartialBounds>,
) -> Result<bool> {
    Ok(verify_cover(g, delta, cover, bounds)?.valid)
}
