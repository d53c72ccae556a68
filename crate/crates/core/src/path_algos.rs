//! Exact TVC on temporal paths and cycles, and local search for Δ-TVC on
//! them through the hitting-set formulation.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    EdgeId, TemporalEdge, TemporalGraph, TemporalVertexSet, Time, Vertex, VertexAppearance,
};

/// Vertex order of an underlying path, or `None`.
fn path_order(g: &TemporalGraph) -> Option<Vec<Vertex>> {
    let n = g.num_vertices();
    if n == 0 || g.num_edges() + 1 != n || g.underlying_degree() > 2 {
        return None;
    }
    if n == 1 {
        return Some(vec![0]);
    }
    let start = (0..n).find(|&v| g.incident(v).len() == 1)?;
    walk(g, start)
}

/// Vertex order of an underlying cycle starting at vertex 0, or `None`.
fn cycle_order(g: &TemporalGraph) -> Option<Vec<Vertex>> {
    let n = g.num_vertices();
    if n < 3 || g.num_edges() != n || (0..n).any(|v| g.incident(v).len() != 2) {
        return None;
    }
    walk(g, 0)
}

fn walk(g: &TemporalGraph, start: Vertex) -> Option<Vec<Vertex>> {
    let n = g.num_vertices();
    let mut order = vec![start];
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut cur = start;
    while let Some(next) = g
        .incident(cur)
        .iter()
        .map(|&e| g.edge(e).other(cur))
        .find(|&w| !seen[w])
    {
        seen[next] = true;
        order.push(next);
        cur = next;
    }
    (order.len() == n).then_some(order)
}

fn edge_between(g: &TemporalGraph, a: Vertex, b: Vertex) -> EdgeId {
    g.incident(a)
        .iter()
        .copied()
        .find(|&e| g.edge(e).other(a) == b)
        .expect("consecutive vertices are adjacent")
}

/// Greedy sweep over a path given as its label sequence `labels[i]` of edge
/// `(order[i], order[i + 1])`; returns the chosen `(position, time)` pairs.
fn sweep(labels: &[&[Time]]) -> Vec<(usize, Time)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < labels.len() {
        let shared = labels
            .get(i + 1)
            .and_then(|next| labels[i].iter().find(|t| next.binary_search(t).is_ok()));
        match shared {
            Some(&t) => {
                out.push((i + 1, t));
                i += 2;
            }
            None => {
                out.push((i + 1, labels[i][0]));
                i += 1;
            }
        }
    }
    out
}

/// Minimum temporal vertex cover (every edge covered once in `[1, T]`) of a temporal path.
pub fn solve_tvc_path(g: &TemporalGraph) -> Result<TemporalVertexSet> {
    let order = path_order(g).ok_or(Error::Topology { expected: "path" })?;
    let labels: Vec<&[Time]> = order
        .windows(2)
        .map(|w| g.edge(edge_between(g, w[0], w[1])).labels.as_slice())
        .collect();
    Ok(sweep(&labels)
        .into_iter()
        .map(|(pos, t)| VertexAppearance::new(order[pos], t))
        .collect())
}

/// Minimum temporal vertex cover of a temporal cycle.
///
/// With the cycle `v0 v1 ... vn`, solves the two paths `v0 .. vn v0'` and
/// `v1 .. vn v0' v0` in which `v0'` is a copy of `v0`, and keeps the smaller.
pub fn solve_tvc_cycle(g: &TemporalGraph) -> Result<TemporalVertexSet> {
    let order = cycle_order(g).ok_or(Error::Topology { expected: "cycle" })?;
    let k = order.len();
    let lab = |a: Vertex, b: Vertex| g.edge(edge_between(g, a, b)).labels.clone();
    let first = lab(order[0], order[1]);
    let closing = lab(order[k - 1], order[0]);
    let copy = k;
    let mut p1: Vec<(Vertex, Vertex, Vec<Time>)> =
        order.windows(2).map(|w| (w[0], w[1], lab(w[0], w[1]))).collect();
    p1.push((order[k - 1], copy, closing.clone()));
    let mut p2: Vec<(Vertex, Vertex, Vec<Time>)> =
        order[1..].windows(2).map(|w| (w[0], w[1], lab(w[0], w[1]))).collect();
    p2.push((order[k - 1], copy, closing));
    p2.push((copy, order[0], first));
    let best = [p1, p2]
        .into_iter()
        .map(|edges| -> Result<TemporalVertexSet> {
            let aux = TemporalGraph::with_lifetime(
                k + 1,
                edges.into_iter().map(|(a, b, l)| TemporalEdge::new(a, b, l)).collect(),
                g.lifetime(),
            )?;
            Ok(solve_tvc_path(&aux)?
                .into_iter()
                .map(|a| VertexAppearance::new(if a.vertex == copy { order[0] } else { a.vertex }, a.time))
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let [a, b]: [TemporalVertexSet; 2] = best.try_into().expect("two candidates");
    Ok(if b.len() < a.len() { b } else { a })
}

/// A range: the appearances covering `edge` inside window `window`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Range {
    pub edge: EdgeId,
    pub window: usize,
    /// Indices into [`RangeSpace::points`], ascending.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeSpace {
    /// Candidate appearances in `(t, v)` order.
    pub points: Vec<VertexAppearance>,
    pub ranges: Vec<Range>,
    /// For every point, the ranges containing it.
    pub incidence: Vec<Vec<usize>>,
}

impl RangeSpace {
    pub fn index_of(&self, a: &VertexAppearance) -> Option<usize> {
        self.points.binary_search(a).ok()
    }

    /// Whether the point indices in `chosen` hit every range.
    pub fn is_hitting_set(&self, chosen: &[usize]) -> bool {
        let mut hit = vec![false; self.ranges.len()];
        for &p in chosen {
            for &r in &self.incidence[p] {
                hit[r] = true;
            }
        }
        hit.into_iter().all(|h| h)
    }

    pub fn to_cover(&self, chosen: &[usize]) -> TemporalVertexSet {
        chosen.iter().map(|&p| self.points[p]).collect()
    }
}

/// Range space of Δ-TVC on a temporal path or cycle; its hitting sets are exactly the Δ-TVCs.
pub fn build_range_space(g: &TemporalGraph, delta: Time) -> Result<RangeSpace> {
    if path_order(g).is_none() && cycle_order(g).is_none() {
        return Err(Error::Topology { expected: "path or cycle" });
    }
    g.check_delta(delta)?;
    let points = g.all_active_appearances().to_vec();
    let index = |v: Vertex, t: Time| {
        points.binary_search(&VertexAppearance::new(v, t)).expect("active appearance")
    };
    let mut ranges = Vec::new();
    for (e, edge) in g.edges().iter().enumerate() {
        for window in 1..=g.window_count(delta) {
            let ts = edge.labels_between(window, window + delta - 1);
            if ts.is_empty() {
                continue;
            }
            let mut members: Vec<usize> = ts.iter().flat_map(|&t| [index(edge.u, t), index(edge.v, t)]).collect();
            members.sort_unstable();
            ranges.push(Range { edge: e, window, members });
        }
    }
    let mut incidence = vec![Vec::new(); points.len()];
    for (r, range) in ranges.iter().enumerate() {
        for &p in &range.members {
            incidence[p].push(r);
        }
    }
    Ok(RangeSpace { points, ranges, incidence })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSearchConfig {
    /// Largest number of chosen points a swap may remove.
    pub swap_size: usize,
    pub max_rounds: usize,
    /// When set, the current solution is shuffled before each round of swap
    /// enumeration instead of being scanned in `(t, v)` order.
    pub seed: Option<u64>,
}

impl Default for LocalSearchConfig {
    fn default() -> Self {
        LocalSearchConfig { swap_size: 3, max_rounds: 10_000, seed: None }
    }
}

/// Swap size `ceil(1 / eps^2)` for a target ratio `1 + eps`.
pub fn swap_size_for_epsilon(eps: f64) -> Result<usize> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Input(format!("epsilon must be positive, got {eps}")));
    }
    Ok((1.0 / (eps * eps)).ceil().max(1.0) as usize)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSearchResult {
    pub cover: TemporalVertexSet,
    /// Point indices of the solution, ascending.
    pub chosen: Vec<usize>,
    /// False when `max_rounds` ran out before reaching a local optimum.
    pub locally_optimal: bool,
    pub swaps: usize,
}

/// Greedy start: repeatedly the point hitting the most unhit ranges, ties to the smallest `(t, v)`.
pub fn greedy_hitting_set(space: &RangeSpace) -> Vec<usize> {
    let mut hit = vec![false; space.ranges.len()];
    let mut left = space.ranges.len();
    let mut chosen = Vec::new();
    while left > 0 {
        let (best, gain) = (0..space.points.len())
            .map(|p| (p, space.incidence[p].iter().filter(|&&r| !hit[r]).count()))
            .fold((0, 0), |acc, x| if x.1 > acc.1 { x } else { acc });
        debug_assert!(gain > 0);
        for &r in &space.incidence[best] {
            if !hit[r] {
                hit[r] = true;
                left -= 1;
            }
        }
        chosen.push(best);
    }
    chosen.sort_unstable();
    chosen
}

/// Local search from the greedy hitting set.
pub fn local_search(space: &RangeSpace, cfg: &LocalSearchConfig) -> Result<LocalSearchResult> {
    local_search_from(space, &greedy_hitting_set(space), cfg)
}

/// Applies first-improving swaps (remove `r <= p` chosen points, add at most
/// `r - 1` others) until none exists or `max_rounds` swaps were made.
pub fn local_search_from(
    space: &RangeSpace,
    start: &[usize],
    cfg: &LocalSearchConfig,
) -> Result<LocalSearchResult> {
    if cfg.swap_size == 0 {
        return Err(Error::Input("swap size must be at least 1".into()));
    }
    let mut chosen: Vec<usize> = start.to_vec();
    chosen.sort_unstable();
    chosen.dedup();
    if chosen.iter().any(|&p| p >= space.points.len()) || !space.is_hitting_set(&chosen) {
        return Err(Error::Input("start solution is not a hitting set".into()));
    }
    let mut rng = cfg.seed.map(ChaCha8Rng::seed_from_u64);
    let mut swaps = 0;
    let mut locally_optimal = false;
    while swaps < cfg.max_rounds {
        let mut order = chosen.clone();
        if let Some(rng) = rng.as_mut() {
            order.shuffle(rng);
        }
        match find_swap(space, &chosen, &order, cfg.swap_size) {
            Some((remove, add)) => {
                chosen.retain(|p| !remove.contains(p));
                chosen.extend(add);
                chosen.sort_unstable();
                swaps += 1;
            }
            None => {
                locally_optimal = true;
                break;
            }
        }
    }
    if !locally_optimal && find_swap(space, &chosen, &chosen, cfg.swap_size).is_none() {
        locally_optimal = true;
    }
    Ok(LocalSearchResult { cover: space.to_cover(&chosen), chosen, locally_optimal, swaps })
}

/// First improving swap, removal sets by size then in `order`, additions by size then index.
fn find_swap(space: &RangeSpace, chosen: &[usize], order: &[usize], p: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut count = vec![0usize; space.ranges.len()];
    let mut in_solution = vec![false; space.points.len()];
    for &q in chosen {
        in_solution[q] = true;
        for &r in &space.incidence[q] {
            count[r] += 1;
        }
    }
    for size in 1..=p.min(order.len()) {
        let mut found = None;
        for_each_subset(order.len(), size, &mut |idx| {
            let remove: Vec<usize> = idx.iter().map(|&i| order[i]).collect();
            for &q in &remove {
                for &r in &space.incidence[q] {
                    count[r] -= 1;
                }
            }
            let open: Vec<usize> = remove
                .iter()
                .flat_map(|&q| space.incidence[q].iter().copied())
                .filter(|&r| count[r] == 0)
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            let add = cheapest_patch(space, &open, &in_solution, size - 1);
            for &q in &remove {
                for &r in &space.incidence[q] {
                    count[r] += 1;
                }
            }
            if let Some(add) = add {
                found = Some((remove, add));
                return true;
            }
            false
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Smallest, then lexicographically least, set of at most `limit` points
/// outside the solution hitting every range in `open`.
fn cheapest_patch(space: &RangeSpace, open: &[usize], in_solution: &[bool], limit: usize) -> Option<Vec<usize>> {
    if open.is_empty() {
        return Some(Vec::new());
    }
    let mut cand: Vec<usize> = open
        .iter()
        .flat_map(|&r| space.ranges[r].members.iter().copied())
        .filter(|&q| !in_solution[q])
        .collect();
    cand.sort_unstable();
    cand.dedup();
    for size in 1..=limit.min(cand.len()) {
        let mut found = None;
        for_each_subset(cand.len(), size, &mut |idx| {
            let ok = open.iter().all(|&r| {
                idx.iter().any(|&i| space.ranges[r].members.binary_search(&cand[i]).is_ok())
            });
            if ok {
                found = Some(idx.iter().map(|&i| cand[i]).collect());
            }
            ok
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order until it returns true.
fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if k > n {
        return false;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if f(&idx) {
            return true;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return false;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::verify_cover;

    fn path(labels: Vec<Vec<Time>>) -> TemporalGraph {
        let n = labels.len() + 1;
        TemporalGraph::new(n, labels.into_iter().enumerate().map(|(i, l)| TemporalEdge::new(i, i + 1, l)).collect())
            .unwrap()
    }

    #[test]
    fn shared_time_saves_one() {
        assert_eq!(solve_tvc_path(&path(vec![vec![1], vec![1]])).unwrap().len(), 1);
        assert_eq!(solve_tvc_path(&path(vec![vec![1], vec![2]])).unwrap().len(), 2);
    }

    #[test]
    fn sweep_uses_smallest_shared_time() {
        let c = solve_tvc_path(&path(vec![vec![2, 3, 5], vec![3, 5]])).unwrap();
        assert_eq!(c.to_vec(), vec![VertexAppearance::new(1, 3)]);
    }

    #[test]
    fn path_order_is_recovered() {
        let g = TemporalGraph::new(
            4,
            vec![TemporalEdge::new(2, 0, vec![1]), TemporalEdge::new(0, 3, vec![1]), TemporalEdge::new(3, 1, vec![2])],
        )
        .unwrap();
        let c = solve_tvc_path(&g).unwrap();
        assert_eq!(c.len(), 2);
        assert!(verify_cover(&g, g.lifetime(), &c, None).unwrap().valid);
    }

    #[test]
    fn triangle_at_one_time() {
        let g = TemporalGraph::new(
            3,
            vec![TemporalEdge::new(0, 1, vec![1]), TemporalEdge::new(1, 2, vec![1]), TemporalEdge::new(0, 2, vec![1])],
        )
        .unwrap();
        assert_eq!(solve_tvc_cycle(&g).unwrap().len(), 2);
        assert!(matches!(solve_tvc_path(&g), Err(Error::Topology { .. })));
    }

    #[test]
    fn disjoint_cycle_times() {
        let g = TemporalGraph::new(
            4,
            (0..4).map(|i| TemporalEdge::new(i, (i + 1) % 4, vec![i + 1])).collect(),
        )
        .unwrap();
        let c = solve_tvc_cycle(&g).unwrap();
        assert_eq!(c.len(), 4);
        assert!(verify_cover(&g, g.lifetime(), &c, None).unwrap().valid);
    }

    #[test]
    fn star_is_rejected() {
        let g = TemporalGraph::new(
            4,
            (1..4).map(|i| TemporalEdge::new(0, i, vec![1])).collect(),
        )
        .unwrap();
        assert!(solve_tvc_path(&g).is_err());
        assert!(solve_tvc_cycle(&g).is_err());
        assert!(build_range_space(&g, 1).is_err());
    }

    #[test]
    fn single_edge_space() {
        let g = path(vec![vec![1, 3]]);
        let s = build_range_space(&g, 2).unwrap();
        assert_eq!(s.points.len(), 4);
        let windows: Vec<usize> = s.ranges.iter().map(|r| r.window).collect();
        assert_eq!(windows, vec![1, 2]);
        assert_eq!(s.ranges[0].members, vec![0, 1]);
        assert_eq!(s.ranges[1].members, vec![2, 3]);
    }

    #[test]
    fn local_search_removes_redundancy() {
        let g = path(vec![vec![1], vec![1], vec![1]]);
        let s = build_range_space(&g, 1).unwrap();
        let all: Vec<usize> = (0..s.points.len()).collect();
        let r = local_search_from(&s, &all, &LocalSearchConfig::default()).unwrap();
        assert!(r.locally_optimal);
        assert_eq!(r.chosen.len(), 2);
        assert!(s.is_hitting_set(&r.chosen));
    }

    #[test]
    fn round_cap_keeps_feasibility() {
        let g = path(vec![vec![1, 2], vec![1, 2], vec![2, 3]]);
        let s = build_range_space(&g, 2).unwrap();
        let all: Vec<usize> = (0..s.points.len()).collect();
        let cfg = LocalSearchConfig { max_rounds: 1, ..LocalSearchConfig::default() };
        let r = local_search_from(&s, &all, &cfg).unwrap();
        assert!(!r.locally_optimal);
        assert!(s.is_hitting_set(&r.chosen));
        assert_eq!(r.swaps, 1);
    }

    #[test]
    fn epsilon_mapping() {
        assert_eq!(swap_size_for_epsilon(0.5).unwrap(), 4);
        assert_eq!(swap_size_for_epsilon(1.0).unwrap(), 1);
        assert!(swap_size_for_epsilon(0.0).is_err());
    }

    #[test]
    fn subsets_in_order() {
        let mut seen = Vec::new();
        for_each_subset(4, 2, &mut |s| {
            seen.push(s.to_vec());
            false
        });
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }
}
