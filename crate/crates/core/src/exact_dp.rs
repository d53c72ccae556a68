//! Exact dynamic program for Partial delta-TVC.
//!
//! A state stores, for every edge, the next window index that still has to
//! be covered (or a finished marker). The base window is the smallest such
//! index. The first edge due at the base window must be covered inside it by
//! one of its endpoints; for a fixed endpoint only the latest time of each
//! edge configuration needs to be tried, since a later time covers the same
//! edges and leaves every pointer at least as far advanced.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{
    EdgeId, PartialBounds, TemporalGraph, TemporalVertexSet, Time, Vertex, VertexAppearance,
};

const FINISHED: u32 = u32::MAX;

pub const DEFAULT_STATE_GUARD: usize = 1 << 26;

/// The other edges incident to `endpoint` that are active together with `edge`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeConfiguration {
    pub edge: EdgeId,
    pub endpoint: Vertex,
    pub members: Vec<EdgeId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChoiceRule {
    /// Latest time per configuration.
    #[default]
    LastPerConfiguration,
    /// Every time of the due edge in the base window.
    EveryAppearance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpConfig {
    pub rule: ChoiceRule,
    /// Maximum number of memoized states.
    pub state_guard: usize,
}

impl Default for DpConfig {
    fn default() -> Self {
        DpConfig { rule: ChoiceRule::default(), state_guard: DEFAULT_STATE_GUARD }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpResult {
    pub size: usize,
    pub witness: TemporalVertexSet,
    pub states_visited: usize,
}

/// Groups the labels of `e` by the set of other edges at `v` active at the same time.
///
/// Configurations are listed in order of their first occurrence.
pub fn configurations_of(
    g: &TemporalGraph,
    e: EdgeId,
    v: Vertex,
) -> Result<Vec<(EdgeConfiguration, Vec<Time>)>> {
    if e >= g.num_edges() {
        return Err(Error::EdgeOutOfRange { index: e, m: g.num_edges() });
    }
    if !g.edge(e).has_endpoint(v) {
        return Err(Error::NotAnEndpoint { vertex: v, edge: e });
    }
    let mut out: Vec<(EdgeConfiguration, Vec<Time>)> = Vec::new();
    for &t in &g.edge(e).labels {
        let members = members_at(g, e, v, t);
        match out.iter_mut().find(|(c, _)| c.members == members) {
            Some((_, times)) => times.push(t),
            None => out.push((EdgeConfiguration { edge: e, endpoint: v, members }, vec![t])),
        }
    }
    Ok(out)
}

fn members_at(g: &TemporalGraph, e: EdgeId, v: Vertex, t: Time) -> Vec<EdgeId> {
    g.incident(v).iter().copied().filter(|&f| f != e && g.edge(f).is_active(t)).collect()
}

/// Exact optimum of the Partial delta-TVC instance `(g, bounds)`.
pub fn solve_partial(g: &TemporalGraph, delta: Time, bounds: &PartialBounds) -> Result<DpResult> {
    solve_partial_with(g, delta, bounds, &DpConfig::default())
}

/// Exact optimum with every edge obligated in all of its windows.
pub fn solve(g: &TemporalGraph, delta: Time) -> Result<DpResult> {
    if g.num_edges() == 0 {
        g.check_delta(delta)?;
        return Ok(DpResult { size: 0, witness: TemporalVertexSet::new(), states_visited: 1 });
    }
    solve_partial(g, delta, &PartialBounds::full(g, delta)?)
}

pub fn solve_partial_with(
    g: &TemporalGraph,
    delta: Time,
    bounds: &PartialBounds,
    cfg: &DpConfig,
) -> Result<DpResult> {
    g.check_delta(delta)?;
    bounds.validate(g, delta)?;
    let dp = Dp { g, delta, bounds, cfg };
    let root: Vec<u32> = (0..g.num_edges()).map(|e| dp.normalize(e, bounds.get(e).0)).collect();
    let memo = dp.run(&root)?;
    let mut witness = TemporalVertexSet::new();
    let size = memo[&root].0 as usize;
    let mut state = root;
    while let Some(&(_, Some(a))) = memo.get(&state) {
        witness.insert(a);
        state = dp.apply(&state, a);
    }
    debug_assert_eq!(size, witness.len());
    Ok(DpResult { size, witness, states_visited: memo.len() })
}

type Memo = HashMap<Vec<u32>, (u32, Option<VertexAppearance>)>;

struct Dp<'a> {
    g: &'a TemporalGraph,
    delta: Time,
    bounds: &'a PartialBounds,
    cfg: &'a DpConfig,
}

struct Frame {
    state: Vec<u32>,
    children: Vec<(VertexAppearance, Vec<u32>)>,
    next: usize,
    best: u32,
    choice: Option<VertexAppearance>,
}

impl Dp<'_> {
    /// Smallest window `i >= from`, `i <= h(e)`, in which `e` appears.
    fn normalize(&self, e: EdgeId, from: usize) -> u32 {
        let labels = &self.g.edge(e).labels;
        let h = self.bounds.get(e).1;
        let p = labels.partition_point(|&x| x < from);
        match labels.get(p) {
            Some(&tau) => {
                let i = from.max((tau + 1).saturating_sub(self.delta));
                if i <= h {
                    i as u32
                } else {
                    FINISHED
                }
            }
            None => FINISHED,
        }
    }

    fn apply(&self, s: &[u32], a: VertexAppearance) -> Vec<u32> {
        let mut out = s.to_vec();
        for &f in self.g.incident(a.vertex) {
            if out[f] != FINISHED && self.g.edge(f).is_active(a.time) {
                let from = (out[f] as usize).max(a.time + 1);
                out[f] = self.normalize(f, from);
            }
        }
        out
    }

    fn choices(&self, s: &[u32]) -> Vec<(VertexAppearance, Vec<u32>)> {
        let Some(t) = s.iter().copied().filter(|&x| x != FINISHED).min() else {
            return Vec::new();
        };
        let e = s.iter().position(|&x| x == t).unwrap();
        let edge = self.g.edge(e);
        let t = t as usize;
        let times = edge.labels_between(t, t + self.delta - 1);
        let mut out = Vec::new();
        for w in [edge.u, edge.v] {
            let mut picked: Vec<Time> = match self.cfg.rule {
                ChoiceRule::EveryAppearance => times.to_vec(),
                ChoiceRule::LastPerConfiguration => {
                    let mut seen: Vec<Vec<EdgeId>> = Vec::new();
                    let mut last = Vec::new();
                    for &tau in times.iter().rev() {
                        let m = members_at(self.g, e, w, tau);
                        if !seen.contains(&m) {
                            seen.push(m);
                            last.push(tau);
                        }
                    }
                    last
                }
            };
            picked.sort_unstable_by(|a, b| b.cmp(a));
            for tau in picked {
                let a = VertexAppearance::new(w, tau);
                out.push((a, self.apply(s, a)));
            }
        }
        out
    }

    fn frame(&self, state: Vec<u32>) -> Frame {
        let children = self.choices(&state);
        Frame { state, children, next: 0, best: u32::MAX, choice: None }
    }

    fn run(&self, root: &[u32]) -> Result<Memo> {
        let mut memo: Memo = HashMap::new();
        let mut stack = vec![self.frame(root.to_vec())];
        while let Some(top) = stack.last_mut() {
            if top.children.is_empty() {
                let f = stack.pop().unwrap();
                memo.insert(f.state, (0, None));
            } else if top.next < top.children.len() {
                let (a, ref child) = top.children[top.next];
                if let Some(&(c, _)) = memo.get(child) {
                    if c + 1 < top.best {
                        top.best = c + 1;
                        top.choice = Some(a);
                    }
                    top.next += 1;
                } else {
                    let child = child.clone();
                    stack.push(self.frame(child));
                }
            } else {
                let f = stack.pop().unwrap();
                memo.insert(f.state, (f.best, f.choice));
            }
            if memo.len() > self.cfg.state_guard {
                return Err(Error::StateSpace { guard: self.cfg.state_guard });
            }
        }
        Ok(memo)
    }
}
