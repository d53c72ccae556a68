//! Bounded search tree parameterized by the solution size `k`.
//!
//! Each node takes the earliest uncovered obligation `(window, edge)` and
//! branches on the at most `2 * delta` appearances able to cover it.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use crate::cover::{obligations, Violation};
use crate::error::{Error, Result};
use crate::graph::{PartialBounds, TemporalGraph, TemporalVertexSet, Time, VertexAppearance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FptConfig {
    /// Skip a child whose newly covered obligations are a subset of a sibling's.
    pub dominance_prune: bool,
    /// Explore the children of the root on the rayon pool.
    pub parallel: bool,
    /// Abort with [`Error::Timeout`] after this many search nodes.
    pub node_budget: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FptOutcome {
    pub cover: Option<TemporalVertexSet>,
    pub nodes: u64,
}

/// Returns a cover of size at most `k` if one exists.
pub fn solve_bounded(
    g: &TemporalGraph,
    delta: Time,
    k: usize,
    bounds: Option<&PartialBounds>,
) -> Result<Option<TemporalVertexSet>> {
    Ok(solve_bounded_with(g, delta, k, bounds, &FptConfig::default())?.cover)
}

pub fn solve_bounded_with(
    g: &TemporalGraph,
    delta: Time,
    k: usize,
    bounds: Option<&PartialBounds>,
    cfg: &FptConfig,
) -> Result<FptOutcome> {
    let search = Search::new(g, delta, bounds, cfg)?;
    let cover = search.run(k)?;
    Ok(FptOutcome { cover, nodes: search.nodes.load(Ordering::Relaxed) })
}

struct Search<'a> {
    g: &'a TemporalGraph,
    delta: Time,
    obligations: Vec<Violation>,
    /// Obligation indices covered by each appearance.
    covers: HashMap<VertexAppearance, Vec<usize>>,
    cfg: FptConfig,
    nodes: AtomicU64,
    aborted: AtomicBool,
}

impl<'a> Search<'a> {
    fn new(g: &'a TemporalGraph, delta: Time, bounds: Option<&PartialBounds>, cfg: &FptConfig) -> Result<Self> {
        g.check_delta(delta)?;
        let full;
        let bounds = match bounds {
            Some(b) => {
                b.validate(g, delta)?;
                b
            }
            None => {
                full = PartialBounds::full(g, delta)?;
                &full
            }
        };
        let obligations = if g.num_edges() == 0 { Vec::new() } else { obligations(g, delta, bounds) };
        let mut covers: HashMap<VertexAppearance, Vec<usize>> = HashMap::new();
        for (idx, ob) in obligations.iter().enumerate() {
            let edge = g.edge(ob.edge);
            for &t in edge.labels_between(ob.window, ob.window + delta - 1) {
                for w in [edge.u, edge.v] {
                    covers.entry(VertexAppearance::new(w, t)).or_default().push(idx);
                }
            }
        }
        Ok(Search {
            g,
            delta,
            obligations,
            covers,
            cfg: *cfg,
            nodes: AtomicU64::new(0),
            aborted: AtomicBool::new(false),
        })
    }

    fn run(&self, k: usize) -> Result<Option<TemporalVertexSet>> {
        let mut counts = vec![0u32; self.obligations.len()];
        let mut chosen = Vec::new();
        let found = if self.cfg.parallel {
            self.root_parallel(k, &counts)
        } else {
            self.branch(k, 0, &mut counts, &mut chosen)
        };
        if self.aborted.load(Ordering::Relaxed) {
            return Err(Error::Timeout { budget: self.cfg.node_budget.unwrap_or(0) });
        }
        Ok(found.map(|v| v.into_iter().collect()))
    }

    fn tick(&self) -> bool {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if let Some(b) = self.cfg.node_budget {
            if n > b {
                self.aborted.store(true, Ordering::Relaxed);
            }
        }
        self.aborted.load(Ordering::Relaxed)
    }

    fn frontier(&self, counts: &[u32], from: usize) -> Option<usize> {
        (from..counts.len()).find(|&i| counts[i] == 0)
    }

    /// Appearances able to cover obligation `idx`: endpoint `u` first, times ascending.
    fn children(&self, idx: usize, counts: &[u32]) -> Vec<VertexAppearance> {
        let ob = self.obligations[idx];
        let edge = self.g.edge(ob.edge);
        let times = edge.labels_between(ob.window, ob.window + self.delta - 1);
        let mut out: Vec<VertexAppearance> = [edge.u, edge.v]
            .into_iter()
            .flat_map(|w| times.iter().map(move |&t| VertexAppearance::new(w, t)))
            .collect();
        if self.cfg.dominance_prune {
            let gains: Vec<Vec<usize>> = out
                .iter()
                .map(|a| self.covers[a].iter().copied().filter(|&o| counts[o] == 0).collect())
                .collect();
            let keep: Vec<bool> = (0..out.len())
                .map(|i| {
                    !(0..out.len()).any(|j| {
                        j != i
                            && is_subset(&gains[i], &gains[j])
                            && (gains[i].len() < gains[j].len() || j < i)
                    })
                })
                .collect();
            out = out.into_iter().zip(keep).filter_map(|(a, k)| k.then_some(a)).collect();
        }
        out
    }

    fn apply(&self, a: &VertexAppearance, counts: &mut [u32], delta: i32) {
        for &o in &self.covers[a] {
            counts[o] = counts[o].wrapping_add_signed(delta);
        }
    }

    fn branch(
        &self,
        budget: usize,
        from: usize,
        counts: &mut Vec<u32>,
        chosen: &mut Vec<VertexAppearance>,
    ) -> Option<Vec<VertexAppearance>> {
        if self.tick() {
            return None;
        }
        let Some(idx) = self.frontier(counts, from) else {
            return Some(chosen.clone());
        };
        if budget == 0 {
            return None;
        }
        for a in self.children(idx, counts) {
            self.apply(&a, counts, 1);
            chosen.push(a);
            let r = self.branch(budget - 1, idx, counts, chosen);
            chosen.pop();
            self.apply(&a, counts, -1);
            if r.is_some() {
                return r;
            }
            if self.aborted.load(Ordering::Relaxed) {
                return None;
            }
        }
        None
    }

    fn root_parallel(&self, k: usize, counts: &[u32]) -> Option<Vec<VertexAppearance>> {
        if self.tick() {
            return None;
        }
        let Some(idx) = self.frontier(counts, 0) else {
            return Some(Vec::new());
        };
        if k == 0 {
            return None;
        }
        self.children(idx, counts).into_par_iter().find_map_any(|a| {
            let mut local = counts.to_vec();
            self.apply(&a, &mut local, 1);
            let mut chosen = vec![a];
            self.branch(k - 1, idx, &mut local, &mut chosen)
        })
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::verify_cover;
    use crate::graph::TemporalEdge;

    fn single(labels: Vec<Time>) -> TemporalGraph {
        TemporalGraph::new(2, vec![TemporalEdge::new(0, 1, labels)]).unwrap()
    }

    #[test]
    fn single_edge_once() {
        let g = single(vec![1]);
        let c = solve_bounded(&g, 1, 1, None).unwrap().unwrap();
        assert_eq!(c.len(), 1);
        assert!(solve_bounded(&g, 1, 0, None).unwrap().is_none());
    }

    #[test]
    fn vertical_gadget() {
        let g = single(vec![1, 2, 3, 4, 5, 6]);
        assert!(solve_bounded(&g, 2, 2, None).unwrap().is_none());
        let c = solve_bounded(&g, 2, 3, None).unwrap().unwrap();
        assert!(verify_cover(&g, 2, &c, None).unwrap().valid);
    }

    #[test]
    fn budget_trips() {
        let g = single(vec![1, 2, 3, 4, 5, 6, 7, 8]);
        let cfg = FptConfig { node_budget: Some(3), ..FptConfig::default() };
        assert!(matches!(solve_bounded_with(&g, 2, 3, None, &cfg), Err(Error::Timeout { .. })));
    }

    #[test]
    fn parallel_and_pruned_agree() {
        let g = TemporalGraph::new(
            4,
            vec![
                TemporalEdge::new(0, 1, vec![1, 2, 4]),
                TemporalEdge::new(1, 2, vec![2, 3]),
                TemporalEdge::new(2, 3, vec![1, 3, 4]),
            ],
        )
        .unwrap();
        let min_k = |cfg: &FptConfig| {
            (0..10).find(|&k| solve_bounded_with(&g, 2, k, None, cfg).unwrap().cover.is_some()).unwrap()
        };
        let base = min_k(&FptConfig::default());
        for cfg in [
            FptConfig { parallel: true, ..FptConfig::default() },
            FptConfig { dominance_prune: true, ..FptConfig::default() },
        ] {
            assert_eq!(min_k(&cfg), base, "{cfg:?}");
        }
    }
}
