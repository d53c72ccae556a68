//! Gadget fragments placed on a path `0 - 1 - 2 - ...` over time.
//!
//! A time-edge is identified by the left vertex `v` of the path edge
//! `(v, v + 1)` and a time slot.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::formula::Sign;
use crate::error::{Error, Result};
use crate::graph::{TemporalEdge, TemporalGraph, Time, Vertex};

/// Vertices of one segment block.
pub const BLOCK_WIDTH: usize = 8;
/// Offset between consecutive blocks of one variable (block plus four bridge vertices).
pub const BLOCK_PITCH: usize = 12;
/// A block spans `start ..= start + BLOCK_SPAN - 1` in time.
pub const BLOCK_SPAN: Time = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TimeEdge {
    pub left: Vertex,
    pub time: Time,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FragmentKind {
    Block { block: usize },
    Bridge { left: usize, right: usize },
    Vertical { block: usize, sign: Sign, height: usize },
    Clause { sign: Sign, blocks: [usize; 3], start: Time },
    Connector { clause: usize, from: Vertex, to: Vertex, time: Time },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fragment {
    pub kind: FragmentKind,
    pub time_edges: Vec<TimeEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPlacement {
    pub start_vertex: Vertex,
    pub start_time: Time,
}

impl BlockPlacement {
    /// Vertex `u_j` of the block.
    pub fn u(&self, j: usize) -> Vertex {
        self.start_vertex + j
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub fragments: Vec<Fragment>,
    pub blocks: Vec<BlockPlacement>,
    #[serde(skip)]
    owner: HashMap<TimeEdge, usize>,
    #[serde(skip)]
    block_fragments: Vec<Vec<usize>>,
}

impl Layout {
    pub fn new() -> Self {
        Self::default()
    }

    fn insert(&mut self, kind: FragmentKind, edges: Vec<TimeEdge>, parents: &[usize]) -> Result<usize> {
        let id = self.fragments.len();
        let mut edges = edges;
        edges.sort_unstable();
        edges.dedup();
        for te in &edges {
            if let Some(&other) = self.owner.get(te) {
                if !parents.contains(&other) {
                    return Err(Error::Layout(format!(
                        "time-edge ({}, {}) at time {} already belongs to fragment {other}",
                        te.left,
                        te.left + 1,
                        te.time
                    )));
                }
            }
        }
        for te in &edges {
            self.owner.entry(*te).or_insert(id);
        }
        self.fragments.push(Fragment { kind, time_edges: edges });
        Ok(id)
    }

    fn block(&self, b: usize) -> Result<BlockPlacement> {
        self.blocks.get(b).copied().ok_or_else(|| Error::Layout(format!("no block {b}")))
    }

    /// Path `u_0 .. u_7`: end edges active `t ..= t + 8`, middle edges at `t + 1` and `t + 7`.
    pub fn add_segment_block(&mut self, start_vertex: Vertex, start_time: Time) -> Result<usize> {
        if start_time == 0 {
            return Err(Error::Layout("blocks start at time 1 or later".into()));
        }
        let mut edges = Vec::new();
        for t in start_time..start_time + BLOCK_SPAN {
            edges.push(TimeEdge { left: start_vertex, time: t });
            edges.push(TimeEdge { left: start_vertex + 6, time: t });
        }
        for j in 1..6 {
            for t in [start_time + 1, start_time + 7] {
                edges.push(TimeEdge { left: start_vertex + j, time: t });
            }
        }
        let b = self.blocks.len();
        let id = self.insert(FragmentKind::Block { block: b }, edges, &[])?;
        self.blocks.push(BlockPlacement { start_vertex, start_time });
        self.block_fragments.push(vec![id]);
        Ok(b)
    }

    /// Path `u6, u7, w1..w4, u0', u1'` active at `t + 2` and `t + 5`.
    pub fn add_horizontal_bridge(&mut self, left: usize, right: usize) -> Result<usize> {
        let (l, r) = (self.block(left)?, self.block(right)?);
        if l.start_time != r.start_time || r.start_vertex != l.start_vertex + BLOCK_PITCH {
            return Err(Error::Layout(format!(
                "blocks {left} and {right} are not aligned for a bridge"
            )));
        }
        let t = l.start_time;
        let edges = (l.u(6)..r.u(1))
            .flat_map(|v| [t + 2, t + 5].map(|time| TimeEdge { left: v, time }))
            .collect();
        let parents = [self.block_fragments[left][0], self.block_fragments[right][0]];
        self.insert(FragmentKind::Bridge { left, right }, edges, &parents)
    }

    /// `height` consecutive appearances of `u6u7` from `t + 8` upwards (positive)
    /// or of `u0u1` from `t` downwards (negative).
    pub fn add_vertical_line(&mut self, block: usize, sign: Sign, height: usize) -> Result<usize> {
        if height == 0 || height % 2 != 0 {
            return Err(Error::Input(format!("vertical gadget height {height} must be even and positive")));
        }
        let p = self.block(block)?;
        let (left, times): (Vertex, Vec<Time>) = match sign {
            Sign::Positive => {
                let top = p.start_time + BLOCK_SPAN - 1;
                (p.u(6), (top..top + height).collect())
            }
            Sign::Negative => {
                if height > p.start_time {
                    return Err(Error::Layout("vertical gadget reaches below time 1".into()));
                }
                (p.u(0), (p.start_time + 1 - height..=p.start_time).collect())
            }
        };
        let edges = times.into_iter().map(|time| TimeEdge { left, time }).collect();
        let parents = self.block_fragments[block].clone();
        let id = self.insert(FragmentKind::Vertical { block, sign, height }, edges, &parents)?;
        self.block_fragments[block].push(id);
        Ok(id)
    }

    /// Clause edges of three blocks active `start ..= start + 3`, plus two
    /// single-time connectors. Returns the clause fragment and both connectors.
    pub fn add_clause(&mut self, sign: Sign, blocks: [usize; 3], start: Time) -> Result<[usize; 3]> {
        let p = blocks.map(|b| self.blocks.get(b).copied());
        let [Some(x), Some(y), Some(z)] = p else {
            return Err(Error::Layout("clause refers to a missing block".into()));
        };
        if !(x.start_vertex < y.start_vertex && y.start_vertex < z.start_vertex) {
            return Err(Error::Layout("clause blocks must be ordered left to right".into()));
        }
        let (edge_of, conn_time, conn_from, conn_to): (fn(&BlockPlacement) -> Vertex, Time, usize, usize) =
            match sign {
                Sign::Positive => (|b| b.u(6), start + 2, 7, 6),
                Sign::Negative => (|b| b.u(0), start + 1, 1, 0),
            };
        let edges = [x, y, z]
            .iter()
            .flat_map(|b| (start..start + 4).map(move |time| TimeEdge { left: edge_of(b), time }))
            .collect();
        let mut parents = Vec::new();
        for &b in &blocks {
            parents.extend(self.block_fragments[b].iter().copied());
        }
        let clause_id = self.fragments.len();
        let c = self.insert(FragmentKind::Clause { sign, blocks, start }, edges, &parents)?;
        let mut ids = [c, 0, 0];
        for (slot, (a, b)) in [(x, y), (y, z)].into_iter().enumerate() {
            let (from, to) = (a.u(conn_from), b.u(conn_to));
            if (to - from) % 2 == 0 {
                return Err(Error::Layout(format!("connector {from}-{to} has even length")));
            }
            let edges = (from..to).map(|left| TimeEdge { left, time: conn_time }).collect();
            let kind = FragmentKind::Connector { clause: clause_id, from, to, time: conn_time };
            ids[slot + 1] = self.insert(kind, edges, &[])?;
        }
        Ok(ids)
    }

    /// Number of distinct time-edges placed so far.
    pub fn time_edge_count(&self) -> usize {
        self.owner.len()
    }

    /// Fragment first claiming each time-edge.
    pub fn owner_of(&self, te: &TimeEdge) -> Option<usize> {
        self.owner.get(te).copied()
    }

    /// Assembles the temporal graph on `n` vertices with lifetime at least `lifetime`.
    pub fn to_graph(&self, n: usize, lifetime: Time) -> Result<TemporalGraph> {
        let mut labels: BTreeMap<Vertex, Vec<Time>> = BTreeMap::new();
        for te in self.owner.keys() {
            labels.entry(te.left).or_default().push(te.time);
        }
        let edges = labels
            .into_iter()
            .map(|(v, mut ts)| {
                ts.sort_unstable();
                TemporalEdge::new(v, v + 1, ts)
            })
            .collect();
        TemporalGraph::with_lifetime(n, edges, lifetime)
    }
}
