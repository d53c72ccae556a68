//! Brute-force exact solvers used as ground truth.
//!
//! [`solve_enumerate`] tries candidate subsets by increasing size;
//! [`solve_ids`] deepens the bounded search tree of [`crate::fpt`]. The two
//! share nothing beyond the graph model and the obligation list.

use fixedbitset::FixedBitSet;

use crate::cover::{obligations, Violation};
use crate::error::{Error, Result};
use crate::fpt::{solve_bounded_with, FptConfig};
use crate::graph::{PartialBounds, TemporalGraph, TemporalVertexSet, Time, VertexAppearance};

pub const DEFAULT_GUARD: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub size: usize,
    pub witness: TemporalVertexSet,
    /// Subsets tested or search nodes expanded.
    pub explored: u64,
}

/// All `(v, t)` with an edge incident to `v` active at `t`.
pub fn candidate_appearances(g: &TemporalGraph) -> TemporalVertexSet {
    g.all_active_appearances()
}

/// Exact optimum over subsets of [`candidate_appearances`], refusing above `guard` candidates.
///
/// Subsets are tried by size, then lexicographically in `(t, v)` order, so
/// the witness is the lexicographically least optimum.
pub fn solve_enumerate(
    g: &TemporalGraph,
    delta: Time,
    bounds: Option<&PartialBounds>,
    guard: usize,
) -> Result<OracleResult> {
    let points = candidate_appearances(g).to_vec();
    enumerate_over(g, delta, bounds, &points, guard)
}

/// Same as [`solve_enumerate`] but over every pair in `[0, n) x [1, T]`.
pub fn solve_enumerate_all_pairs(
    g: &TemporalGraph,
    delta: Time,
    bounds: Option<&PartialBounds>,
    guard: usize,
) -> Result<OracleResult> {
    let points: Vec<VertexAppearance> = (1..=g.lifetime())
        .flat_map(|t| (0..g.num_vertices()).map(move |v| VertexAppearance::new(v, t)))
        .collect();
    enumerate_over(g, delta, bounds, &points, guard)
}

fn resolve_bounds(g: &TemporalGraph, delta: Time, bounds: Option<&PartialBounds>) -> Result<Vec<Violation>> {
    g.check_delta(delta)?;
    if g.num_edges() == 0 {
        return Ok(Vec::new());
    }
    Ok(match bounds {
        Some(b) => {
            b.validate(g, delta)?;
            obligations(g, delta, b)
        }
        None => obligations(g, delta, &PartialBounds::full(g, delta)?),
    })
}

fn enumerate_over(
    g: &TemporalGraph,
    delta: Time,
    bounds: Option<&PartialBounds>,
    points: &[VertexAppearance],
    guard: usize,
) -> Result<OracleResult> {
    if points.len() > guard {
        return Err(Error::OracleTooLarge { candidates: points.len(), guard });
    }
    let obs = resolve_bounds(g, delta, bounds)?;
    let masks: Vec<FixedBitSet> = points
        .iter()
        .map(|p| {
            let mut m = FixedBitSet::with_capacity(obs.len());
            for (i, ob) in obs.iter().enumerate() {
                let e = g.edge(ob.edge);
                if e.has_endpoint(p.vertex) && e.is_active(p.time) && ob.window <= p.time && p.time < ob.window + delta {
                    m.insert(i);
                }
            }
            m
        })
        .collect();
    // Last candidate able to cover each obligation.
    let mut last = vec![None; obs.len()];
    for (i, m) in masks.iter().enumerate() {
        for o in m.ones() {
            last[o] = Some(i);
        }
    }
    let Some(last) = last.into_iter().collect::<Option<Vec<usize>>>() else {
        return Err(Error::Input("instance has an obligation no appearance can cover".into()));
    };
    let mut explored = 0u64;
    let full = obs.len();
    let search = Search { masks: &masks, last: &last, full };
    for size in 0..=points.len() {
        let mut pick = Vec::with_capacity(size);
        let mut acc = vec![FixedBitSet::with_capacity(full); size + 1];
        if search.combos(size, 0, &mut acc, &mut pick, &mut explored) {
            let witness: TemporalVertexSet = pick.iter().map(|&i| points[i]).collect();
            return Ok(OracleResult { size, witness, explored });
        }
    }
    Err(Error::Input("instance has an obligation no appearance can cover".into()))
}

struct Search<'a> {
    masks: &'a [FixedBitSet],
    last: &'a [usize],
    full: usize,
}

impl Search<'_> {
    /// Extends `pick` by `left` indices from `start` on; `acc[0]` holds the
    /// obligations covered so far and `acc[1..]` is scratch space.
    fn combos(
        &self,
        left: usize,
        start: usize,
        acc: &mut [FixedBitSet],
        pick: &mut Vec<usize>,
        explored: &mut u64,
    ) -> bool {
        *explored += 1;
        if left == 0 {
            return acc[0].count_ones(..) == self.full;
        }
        if self.masks.len() < start + left {
            return false;
        }
        // Some pick must cover the uncovered obligation whose covering points end first.
        let end = acc[0].zeroes().map(|o| self.last[o]).min().unwrap_or(usize::MAX);
        if end < start {
            return false;
        }
        let (head, rest) = acc.split_at_mut(1);
        for i in start..=(self.masks.len() - left).min(end) {
            rest[0].clone_from(&head[0]);
            rest[0].union_with(&self.masks[i]);
            pick.push(i);
            if self.combos(left - 1, i + 1, rest, pick, explored) {
                return true;
            }
            pick.pop();
        }
        false
    }
}

/// Iterative deepening over [`crate::fpt::solve_bounded`], `k = 0, 1, ...`.
///
/// `node_budget` caps the total number of search nodes over all depths.
pub fn solve_ids(
    g: &TemporalGraph,
    delta: Time,
    bounds: Option<&PartialBounds>,
    node_budget: Option<u64>,
) -> Result<OracleResult> {
    resolve_bounds(g, delta, bounds)?;
    let limit = candidate_appearances(g).len();
    let mut explored = 0u64;
    for k in 0..=limit {
        let cfg = FptConfig {
            node_budget: node_budget.map(|b| b.saturating_sub(explored)),
            ..FptConfig::default()
        };
        let out = match solve_bounded_with(g, delta, k, bounds, &cfg) {
            Err(Error::Timeout { .. }) => return Err(Error::Timeout { budget: node_budget.unwrap_or(0) }),
            other => other?,
        };
        explored += out.nodes;
        if let Some(witness) = out.cover {
            return Ok(OracleResult { size: witness.len(), witness, explored });
        }
    }
    Err(Error::Input("instance has an obligation no appearance can cover".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::verify_cover;
    use crate::graph::TemporalEdge;

    #[test]
    fn candidates_of_single_edge() {
        let g = TemporalGraph::new(2, vec![TemporalEdge::new(0, 1, vec![1, 3])]).unwrap();
        assert_eq!(candidate_appearances(&g).len(), 4);
    }

    #[test]
    fn trivial_optima() {
        let g = TemporalGraph::with_lifetime(2, vec![TemporalEdge::new(0, 1, vec![1])], 2).unwrap();
        assert_eq!(solve_enumerate(&g, 2, None, DEFAULT_GUARD).unwrap().size, 1);
        let empty = TemporalGraph::new(3, vec![]).unwrap();
        assert_eq!(solve_ids(&empty, 2, None, None).unwrap().size, 0);
        assert_eq!(solve_enumerate(&empty, 2, None, DEFAULT_GUARD).unwrap().size, 0);
        let two = TemporalGraph::new(
            4,
            vec![TemporalEdge::new(0, 1, vec![1]), TemporalEdge::new(2, 3, vec![1])],
        )
        .unwrap();
        assert_eq!(solve_ids(&two, 1, None, None).unwrap().size, 2);
    }

    #[test]
    fn vertical_gadget_of_height_six() {
        let g = TemporalGraph::new(2, vec![TemporalEdge::new(0, 1, (1..=6).collect())]).unwrap();
        let r = solve_enumerate(&g, 2, None, DEFAULT_GUARD).unwrap();
        assert_eq!(r.size, 3);
        assert!(verify_cover(&g, 2, &r.witness, None).unwrap().valid);
    }

    #[test]
    fn witness_is_lexicographically_least() {
        let g = TemporalGraph::new(2, vec![TemporalEdge::new(0, 1, vec![1, 2])]).unwrap();
        let r = solve_enumerate(&g, 2, None, DEFAULT_GUARD).unwrap();
        assert_eq!(r.witness.to_vec(), vec![VertexAppearance::new(0, 1)]);
    }

    #[test]
    fn guard_refuses() {
        let g = TemporalGraph::new(2, vec![TemporalEdge::new(0, 1, (1..=13).collect())]).unwrap();
        assert!(matches!(
            solve_enumerate(&g, 2, None, DEFAULT_GUARD),
            Err(Error::OracleTooLarge { candidates: 26, .. })
        ));
    }
}
