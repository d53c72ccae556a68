//! Approximation algorithms: the per-edge d-approximation and the
//! (d-1)-approximation that first covers co-occurring 3-vertex paths.

use serde::{Deserialize, Serialize};

use crate::cover::covered_times;
use crate::error::{Error, Result};
use crate::exact_dp;
use crate::graph::{
    EdgeId, PartialBounds, TemporalEdge, TemporalGraph, TemporalVertexSet, Time, Vertex, VertexAppearance,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "phase", rename_all = "snake_case")]
pub enum SubInstanceKind {
    /// The path `a - center - b` through edges `first = a center` and `second = center b`.
    Phase1 { center: Vertex, ends: (Vertex, Vertex), edges: (EdgeId, EdgeId) },
    /// A single edge.
    Phase2 { edge: EdgeId },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubInstance {
    pub kind: SubInstanceKind,
    /// Times given to every edge of the subinstance.
    pub times: Vec<Time>,
    /// Window bounds `(l, h)` shared by the edges of the subinstance.
    pub bounds: (usize, usize),
    /// Iteration that produced the subinstance.
    pub origin: usize,
    /// Size of the optimum found for it; 0 until solved.
    pub optimum: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct ApproxConfig {
    /// Minimum difference between consecutive times that starts a new Phase 1 subinstance.
    pub phase1_gap: Option<Time>,
    /// Same for Phase 2; defaults to `2 * delta - 1`.
    pub phase2_gap: Option<Time>,
}

impl ApproxConfig {
    fn gaps(&self, delta: Time) -> (Time, Time) {
        (self.phase1_gap.unwrap_or(delta), self.phase2_gap.unwrap_or(2 * delta - 1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxReport {
    pub cover: TemporalVertexSet,
    pub subinstances: Vec<SubInstance>,
    /// Guaranteed ratio: `d - 1` for the improved algorithm when `d >= 3`, else `d`.
    pub ratio_bound_used: usize,
}

/// Minimum cover of edge `e` alone over its bounded windows.
///
/// Scans windows in order; an uncovered obligated window gets the latest
/// appearance of `e` inside it, on the lower endpoint.
pub fn solve_single_edge(
    g: &TemporalGraph,
    delta: Time,
    e: EdgeId,
    bounds: (usize, usize),
) -> Result<TemporalVertexSet> {
    g.check_delta(delta)?;
    if e >= g.num_edges() {
        return Err(Error::EdgeOutOfRange { index: e, m: g.num_edges() });
    }
    let (lo, hi) = bounds;
    let max = g.window_count(delta);
    if lo == 0 || lo > hi || hi > max {
        return Err(Error::InvalidBounds { edge: e, low: lo, high: hi, max });
    }
    let edge = g.edge(e);
    let endpoint = edge.u.min(edge.v);
    let mut out = TemporalVertexSet::new();
    let mut last: Option<Time> = None;
    for i in lo..=hi {
        let ts = edge.labels_between(i, i + delta - 1);
        if ts.is_empty() || last.is_some_and(|t| t >= i) {
            continue;
        }
        let t = *ts.last().expect("non-empty");
        out.insert(VertexAppearance::new(endpoint, t));
        last = Some(t);
    }
    Ok(out)
}

/// Union of per-edge optima; at most `d` times the optimum.
pub fn approx_d(g: &TemporalGraph, delta: Time) -> Result<ApproxReport> {
    g.check_delta(delta)?;
    let full = (1, g.window_count(delta));
    let mut cover = TemporalVertexSet::new();
    let mut subinstances = Vec::new();
    for (e, edge) in g.edges().iter().enumerate() {
        let part = solve_single_edge(g, delta, e, full)?;
        subinstances.push(SubInstance {
            kind: SubInstanceKind::Phase2 { edge: e },
            times: edge.labels.clone(),
            bounds: full,
            origin: e,
            optimum: part.len(),
        });
        cover.union_with(&part);
    }
    Ok(ApproxReport { cover, subinstances, ratio_bound_used: g.max_snapshot_degree() })
}

/// Per edge, whether it is obligated and uncovered in window `i` (index `i - 1`).
fn uncovered(g: &TemporalGraph, delta: Time, x: &TemporalVertexSet) -> Result<Vec<Vec<bool>>> {
    let covered = covered_times(g, x)?;
    let w = g.window_count(delta);
    Ok(g.edges()
        .iter()
        .zip(&covered)
        .map(|(edge, cov)| {
            (1..=w)
                .map(|i| {
                    let end = i + delta - 1;
                    !edge.labels_between(i, end).is_empty() && !cov.iter().any(|&t| i <= t && t <= end)
                })
                .collect()
        })
        .collect())
}

/// Windows containing time `t`.
fn windows_at(g: &TemporalGraph, delta: Time, t: Time) -> std::ops::RangeInclusive<usize> {
    (t + 1).saturating_sub(delta).max(1)..=t.min(g.window_count(delta))
}

fn open_at(g: &TemporalGraph, delta: Time, open: &[Vec<bool>], e: EdgeId, t: Time) -> bool {
    windows_at(g, delta, t).any(|i| open[e][i - 1])
}

/// A 3-vertex path `a - center - b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct P3 {
    pub center: Vertex,
    pub edges: (EdgeId, EdgeId),
}

impl P3 {
    fn ends(&self, g: &TemporalGraph) -> (Vertex, Vertex) {
        (g.edge(self.edges.0).other(self.center), g.edge(self.edges.1).other(self.center))
    }
}

/// Eligible path with the earliest time, then smallest center, then edge pair.
pub fn select_p3(g: &TemporalGraph, delta: Time, x: &TemporalVertexSet) -> Result<Option<P3>> {
    g.check_delta(delta)?;
    let open = uncovered(g, delta, x)?;
    let mut best: Option<(Time, P3)> = None;
    for center in 0..g.num_vertices() {
        let inc = g.incident(center);
        for (a, &e1) in inc.iter().enumerate() {
            for &e2 in &inc[a + 1..] {
                let (e1, e2) = (e1.min(e2), e1.max(e2));
                let t = g.edge(e1).labels.iter().copied().find(|&t| {
                    g.edge(e2).is_active(t) && open_at(g, delta, &open, e1, t) && open_at(g, delta, &open, e2, t)
                });
                if let Some(t) = t {
                    let cand = (t, P3 { center, edges: (e1, e2) });
                    let key = |c: &(Time, P3)| (c.0, c.1.center, c.1.edges);
                    if best.as_ref().is_none_or(|b| key(&cand) < key(b)) {
                        best = Some(cand);
                    }
                }
            }
        }
    }
    Ok(best.map(|b| b.1))
}

/// Splits ascending `times` where consecutive elements differ by at least `gap`.
fn split(times: &[Time], gap: Time) -> Vec<Vec<Time>> {
    let mut out: Vec<Vec<Time>> = Vec::new();
    for &t in times {
        match out.last_mut() {
            Some(run) if t - run[run.len() - 1] < gap => run.push(t),
            _ => out.push(vec![t]),
        }
    }
    out
}

/// Phase 1 subinstances of the path selected by [`select_p3`]; empty when none is eligible.
pub fn build_phase1_instances(g: &TemporalGraph, delta: Time, x: &TemporalVertexSet) -> Result<Vec<SubInstance>> {
    match select_p3(g, delta, x)? {
        Some(p) => phase1_instances_for(g, delta, x, p, &ApproxConfig::default()),
        None => Ok(Vec::new()),
    }
}

/// Phase 1 subinstances of a given path.
///
/// `l` is the first window containing `min S_i` in which an edge of the path
/// is uncovered, `h` the first such window for `max S_i` (at least `l`).
pub fn phase1_instances_for(
    g: &TemporalGraph,
    delta: Time,
    x: &TemporalVertexSet,
    p: P3,
    cfg: &ApproxConfig,
) -> Result<Vec<SubInstance>> {
    g.check_delta(delta)?;
    let open = uncovered(g, delta, x)?;
    let (e1, e2) = p.edges;
    let s: Vec<Time> = g
        .edge(e1)
        .labels
        .iter()
        .copied()
        .filter(|&t| g.edge(e2).is_active(t) && open_at(g, delta, &open, e1, t) && open_at(g, delta, &open, e2, t))
        .collect();
    let first_open = |t: Time| windows_at(g, delta, t).find(|&i| open[e1][i - 1] || open[e2][i - 1]);
    let (gap, _) = cfg.gaps(delta);
    Ok(split(&s, gap)
        .into_iter()
        .map(|run| {
            let l = first_open(run[0]).expect("elements of S have an open window");
            let h = first_open(run[run.len() - 1]).unwrap_or(l).max(l);
            SubInstance {
                kind: SubInstanceKind::Phase1 { center: p.center, ends: p.ends(g), edges: p.edges },
                times: run,
                bounds: (l, h),
                origin: 0,
                optimum: 0,
            }
        })
        .collect())
}

/// Phase 2 subinstances of edge `e`; `l` and `h` are the first and last open
/// windows around the run.
fn phase2_instances_for(
    g: &TemporalGraph,
    delta: Time,
    open: &[Vec<bool>],
    e: EdgeId,
    gap: Time,
) -> Vec<SubInstance> {
    let s: Vec<Time> = g.edge(e).labels.iter().copied().filter(|&t| open_at(g, delta, open, e, t)).collect();
    split(&s, gap)
        .into_iter()
        .map(|run| {
            let l = windows_at(g, delta, run[0]).find(|&i| open[e][i - 1]).expect("open");
            let h = windows_at(g, delta, run[run.len() - 1]).rev().find(|&i| open[e][i - 1]).expect("open");
            SubInstance { kind: SubInstanceKind::Phase2 { edge: e }, times: run, bounds: (l, h), origin: 0, optimum: 0 }
        })
        .collect()
}

/// Solves a Phase 1 subinstance exactly on its own three-vertex path.
fn solve_phase1(g: &TemporalGraph, delta: Time, sub: &SubInstance) -> Result<TemporalVertexSet> {
    let SubInstanceKind::Phase1 { center, ends: (a, b), .. } = sub.kind else {
        return Err(Error::Input("not a Phase 1 subinstance".into()));
    };
    let local = TemporalGraph::with_lifetime(
        3,
        vec![TemporalEdge::new(0, 1, sub.times.clone()), TemporalEdge::new(1, 2, sub.times.clone())],
        g.lifetime(),
    )?;
    let (l, h) = sub.bounds;
    let bounds = PartialBounds::new(&local, delta, vec![(l, h), (l, h)])?;
    let map = [a, center, b];
    Ok(exact_dp::solve_partial(&local, delta, &bounds)?
        .witness
        .into_iter()
        .map(|w| VertexAppearance::new(map[w.vertex], w.time))
        .collect())
}

/// Solves a Phase 2 subinstance by greedy stabbing restricted to its times.
fn solve_phase2(g: &TemporalGraph, delta: Time, sub: &SubInstance) -> Result<TemporalVertexSet> {
    let SubInstanceKind::Phase2 { edge } = sub.kind else {
        return Err(Error::Input("not a Phase 2 subinstance".into()));
    };
    let e = g.edge(edge);
    let local = TemporalGraph::with_lifetime(
        e.u.max(e.v) + 1,
        vec![TemporalEdge::new(e.u, e.v, sub.times.clone())],
        g.lifetime(),
    )?;
    solve_single_edge(&local, delta, 0, sub.bounds)
}

/// The improved algorithm with default split gaps.
pub fn approx_d_minus_1(g: &TemporalGraph, delta: Time) -> Result<ApproxReport> {
    approx_d_minus_1_with(g, delta, &ApproxConfig::default())
}

pub fn approx_d_minus_1_with(g: &TemporalGraph, delta: Time, cfg: &ApproxConfig) -> Result<ApproxReport> {
    g.check_delta(delta)?;
    let (_, gap2) = cfg.gaps(delta);
    let mut x = TemporalVertexSet::new();
    let mut subinstances = Vec::new();
    let mut round = 0;
    while let Some(p) = select_p3(g, delta, &x)? {
        for mut sub in phase1_instances_for(g, delta, &x, p, cfg)? {
            let part = solve_phase1(g, delta, &sub)?;
            sub.origin = round;
            sub.optimum = part.len();
            x.union_with(&part);
            subinstances.push(sub);
        }
        round += 1;
    }
    let open = uncovered(g, delta, &x)?;
    for e in 0..g.num_edges() {
        if !open[e].iter().any(|&o| o) {
            continue;
        }
        for mut sub in phase2_instances_for(g, delta, &open, e, gap2) {
            let part = solve_phase2(g, delta, &sub)?;
            sub.origin = round;
            sub.optimum = part.len();
            x.union_with(&part);
            subinstances.push(sub);
        }
    }
    let d = g.max_snapshot_degree();
    let ratio_bound_used = if d >= 3 { d - 1 } else { d };
    Ok(ApproxReport { cover: x, subinstances, ratio_bound_used })
}
