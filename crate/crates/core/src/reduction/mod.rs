//! Temporal-path 2-TVC instances built from planar monotone rectilinear 3SAT.
//!
//! Every variable `x_i` becomes `d_i` segment blocks joined by horizontal
//! bridges; each block feeds one clause through a vertical line gadget.
//! Positive clauses sit above the variable axis, negative ones below.

mod formula;
pub mod layout;

use serde::{Deserialize, Serialize};

pub use formula::{clause_satisfied, parse_formula, Clause, MonotoneFormula, Sign};
use layout::{BlockPlacement, FragmentKind, Layout, BLOCK_PITCH, BLOCK_SPAN};

use crate::error::{Error, Result};
use crate::graph::{
    PartialBounds, TemporalEdge, TemporalGraph, TemporalVertexSet, Time, Vertex, VertexAppearance,
};

/// The two optimum covers of a segment block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    /// Encodes True: `u0u1` on even offsets, `u6u7` on odd offsets.
    Green,
    /// Encodes False: `u0u1` on odd offsets, `u6u7` on even offsets.
    Red,
}

impl Phase {
    pub fn from_bool(value: bool) -> Self {
        if value {
            Phase::Green
        } else {
            Phase::Red
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockInfo {
    /// 1-based variable.
    pub var: usize,
    /// 1-based copy within the variable gadget.
    pub copy: usize,
    pub placement: BlockPlacement,
    /// Index of the clause this block feeds.
    pub clause: usize,
    pub sign: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseInfo {
    pub sign: Sign,
    pub level: i64,
    /// First of the four clause time slots.
    pub start: Time,
    /// Block indices of the three literals, left to right.
    pub blocks: [usize; 3],
    pub vertical_height: usize,
    pub p1: usize,
    pub p2: usize,
    /// Contribution of this clause to the target size.
    pub target_term: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionOutput {
    pub formula: MonotoneFormula,
    #[serde(skip)]
    pub instance: TemporalGraph,
    /// Target size `s`.
    pub s: usize,
    /// `19 * sum(d_i)`.
    pub variable_term: i64,
    pub blocks: Vec<BlockInfo>,
    pub clauses: Vec<ClauseInfo>,
    pub block_start: Time,
    pub layout: Layout,
}

/// Isolated segment block on vertices `0..8` starting at `start`.
pub fn segment_block(start: Time, lifetime: Time) -> Result<TemporalGraph> {
    block_chain(1, start, lifetime)
}

/// `d` segment blocks joined by horizontal bridges, on `12d - 4` vertices.
pub fn block_chain(d: usize, start: Time, lifetime: Time) -> Result<TemporalGraph> {
    if d == 0 {
        return Err(Error::Input("a chain needs at least one block".into()));
    }
    let mut l = Layout::new();
    for i in 0..d {
        l.add_segment_block(i * BLOCK_PITCH, start)?;
        if i > 0 {
            l.add_horizontal_bridge(i - 1, i)?;
        }
    }
    l.to_graph(BLOCK_PITCH * d - 4, lifetime)
}

/// One edge active at `1..=2k`, obligated in windows `1..=2k-1`.
pub fn vertical_gadget(k: usize) -> Result<(TemporalGraph, PartialBounds)> {
    if k == 0 {
        return Err(Error::Input("vertical gadget needs k >= 1".into()));
    }
    let g = TemporalGraph::new(2, vec![TemporalEdge::new(0, 1, (1..=2 * k).collect())])?;
    let b = PartialBounds::new(&g, 2, vec![(1, 2 * k - 1)])?;
    Ok((g, b))
}

/// A clause gadget with connectors of length 1 and three vertical gadgets of height 2.
///
/// The path is `v_x u_x v_y u_y v_z u_z` (vertices `0..6`). Each literal edge
/// is active at `2..=7` (two vertical slots, then four clause slots) and the
/// connectors at 6. With `pinned` the window `[1, 2]` is also obligated,
/// which forces every literal edge to be covered at time 2 as in a block
/// whose vertical gadget carries the non-satisfying phase.
pub fn miniature_clause(pinned: bool) -> Result<(TemporalGraph, PartialBounds)> {
    let lit: Vec<Time> = (2..=7).collect();
    let g = TemporalGraph::with_lifetime(
        6,
        vec![
            TemporalEdge::new(0, 1, lit.clone()),
            TemporalEdge::new(1, 2, vec![6]),
            TemporalEdge::new(2, 3, lit.clone()),
            TemporalEdge::new(3, 4, vec![6]),
            TemporalEdge::new(4, 5, lit),
        ],
        8,
    )?;
    let low = if pinned { 1 } else { 2 };
    let b = PartialBounds::new(&g, 2, vec![(low, 7), (5, 6), (low, 7), (5, 6), (low, 7)])?;
    Ok((g, b))
}

/// The 15-appearance optimum cover of an isolated block. The edge covered
/// on odd offsets shares its inner endpoint with the middle path at `t + 1`
/// and `t + 7`.
pub fn canonical_block_cover(block: &BlockPlacement, phase: Phase) -> TemporalVertexSet {
    let mut c = TemporalVertexSet::new();
    let t = block.start_time;
    let (even_edge, odd_edge) = match phase {
        Phase::Green => (0, 6),
        Phase::Red => (6, 0),
    };
    for o in [0, 2, 4, 6, 8] {
        c.insert(app(outer(block, even_edge), t + o));
    }
    for o in [0, 1, 3, 5, 7, 8] {
        let v = if o == 1 || o == 7 { inner(block, odd_edge) } else { outer(block, odd_edge) };
        c.insert(app(v, t + o));
    }
    c.extend(middle_cover(block, phase));
    c
}

fn app(v: Vertex, t: Time) -> VertexAppearance {
    VertexAppearance::new(v, t)
}

/// Endpoint of an end edge facing away from the block.
fn outer(b: &BlockPlacement, edge: usize) -> Vertex {
    if edge == 0 {
        b.u(0)
    } else {
        b.u(7)
    }
}

fn inner(b: &BlockPlacement, edge: usize) -> Vertex {
    if edge == 0 {
        b.u(1)
    } else {
        b.u(6)
    }
}

/// Extra middle appearances at `t + 1` and `t + 7`.
fn middle_cover(b: &BlockPlacement, phase: Phase) -> Vec<VertexAppearance> {
    let js: [usize; 2] = match phase {
        Phase::Green => [2, 4],
        Phase::Red => [3, 5],
    };
    [1, 7]
        .iter()
        .flat_map(|&o| js.map(|j| app(b.u(j), b.start_time + o)))
        .collect()
}

/// Computes the target size from the formula alone.
///
/// Returns `(s, 19 * sum(d_i), per-clause terms)` where each clause term is
/// `6|l| + 6 * sum of d_b strictly between i and k + 6(d_i - g_i + g_k) + k - i`.
pub fn target_size(f: &MonotoneFormula) -> (i64, i64, Vec<i64>) {
    let d = f.degrees();
    let variable_term = 19 * d.iter().sum::<usize>() as i64;
    let terms: Vec<i64> = f
        .clauses
        .iter()
        .map(|c| {
            let [i, _, k] = c.vars;
            let between: usize = d[i + 1..k].iter().sum();
            6 * c.level.abs()
                + 6 * between as i64
                + 6 * (d[i] as i64 - c.occurrences[0] as i64 + c.occurrences[2] as i64)
                + (k - i) as i64
        })
        .collect();
    let s = variable_term + terms.iter().sum::<i64>() - f.m() as i64 - 4 * f.n as i64;
    (s, variable_term, terms)
}

/// Builds the 2-TVC instance of `f`.
pub fn reduce_formula(f: &MonotoneFormula) -> Result<ReductionOutput> {
    let f = MonotoneFormula::new(f.n, f.clauses.clone())?;
    let d = f.degrees();
    let m = f.m();
    let m2 = f.negative_count();
    let total: usize = d.iter().sum();
    let n_vertices = BLOCK_PITCH * total - 4;
    let lifetime = 4 * (m + 4);
    let block_start = 4 * m2 + 6;

    let mut offset = vec![0usize; f.n + 2];
    for i in 1..=f.n {
        offset[i + 1] = offset[i] + BLOCK_PITCH * d[i];
    }
    // Block index of (var, copy).
    let mut index = vec![Vec::new(); f.n + 1];
    let mut layout = Layout::new();
    let mut owner = vec![(0usize, Sign::Positive); total];
    for (a, c) in f.clauses.iter().enumerate() {
        for p in 0..3 {
            let (v, g) = (c.vars[p], c.occurrences[p]);
            let b: usize = d[1..v].iter().sum::<usize>() + g - 1;
            owner[b] = (a, c.sign);
        }
    }
    let mut blocks = Vec::with_capacity(total);
    for var in 1..=f.n {
        for copy in 1..=d[var] {
            let start_vertex = offset[var] + BLOCK_PITCH * (copy - 1);
            let b = layout.add_segment_block(start_vertex, block_start)?;
            if copy > 1 {
                layout.add_horizontal_bridge(b - 1, b)?;
            }
            index[var].push(b);
            let (clause, sign) = owner[b];
            blocks.push(BlockInfo { var, copy, placement: layout.blocks[b], clause, sign });
        }
    }
    let (s, variable_term, terms) = target_size(&f);
    let mut clauses = Vec::with_capacity(m);
    for (a, c) in f.clauses.iter().enumerate() {
        let j = c.level.unsigned_abs() as usize;
        let (start, height) = match c.sign {
            Sign::Positive => (block_start + 10 + 4 * (j - 1), 4 * (j - 1) + 2),
            Sign::Negative => (5 + 4 * (m2 - j), 4 * (j - 1) + 2),
        };
        let bs = [0, 1, 2].map(|p| index[c.vars[p]][c.occurrences[p] - 1]);
        for &b in &bs {
            layout.add_vertical_line(b, c.sign, height)?;
        }
        let ids = layout.add_clause(c.sign, bs, start)?;
        let len = |id: usize| match layout.fragments[id].kind {
            FragmentKind::Connector { from, to, .. } => to - from,
            _ => 0,
        };
        clauses.push(ClauseInfo {
            sign: c.sign,
            level: c.level,
            start,
            blocks: bs,
            vertical_height: height,
            p1: len(ids[1]),
            p2: len(ids[2]),
            target_term: terms[a],
        });
    }
    let instance = layout.to_graph(n_vertices, lifetime)?;
    if instance.num_edges() != n_vertices - 1 {
        let missing = (0..n_vertices - 1)
            .find(|&v| instance.edges().iter().all(|e| e.u != v))
            .unwrap_or(0);
        return Err(Error::Formula(format!(
            "path edge {missing}-{} is never active; no clause spans it",
            missing + 1
        )));
    }
    if s < 0 {
        return Err(Error::Formula("negative target size".into()));
    }
    Ok(ReductionOutput {
        formula: f,
        instance,
        s: s as usize,
        variable_term,
        blocks,
        clauses,
        block_start,
        layout,
    })
}

/// Role of a literal edge in its clause gadget, left to right.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    X,
    Y,
    Z,
}

impl ReductionOutput {
    /// Cover built from the optimum covers of the gadgets under `assignment`
    /// (`assignment[i - 1]` is the value of `x_i`).
    ///
    /// Under a falsifying assignment the cover has the same size but leaves
    /// the middle literal edge of each falsified clause uncovered in one window.
    pub fn assignment_to_cover(&self, assignment: &[bool]) -> Result<TemporalVertexSet> {
        if assignment.len() != self.formula.n {
            return Err(Error::Input(format!(
                "assignment has {} values for {} variables",
                assignment.len(),
                self.formula.n
            )));
        }
        let mut cover = TemporalVertexSet::new();
        // Isolated-block covers, minus the attached end edge, plus bridges.
        for (b, info) in self.blocks.iter().enumerate() {
            let phase = Phase::from_bool(assignment[info.var - 1]);
            let p = info.placement;
            let attached = match info.sign {
                Sign::Positive => 6,
                Sign::Negative => 0,
            };
            for a in canonical_block_cover(&p, phase) {
                if !(a.vertex == p.u(attached) || a.vertex == p.u(attached + 1)) || !self.is_end_appearance(&p, a) {
                    cover.insert(a);
                }
            }
            if info.copy > 1 {
                let left = &self.blocks[b - 1].placement;
                cover.extend(bridge_cover(left, phase));
            }
        }
        for (a, c) in self.clauses.iter().enumerate() {
            let sat_phase = match c.sign {
                Sign::Positive => Phase::Green,
                Sign::Negative => Phase::Red,
            };
            let helpful: Vec<bool> = c
                .blocks
                .iter()
                .map(|&b| Phase::from_bool(assignment[self.blocks[b].var - 1]) == sat_phase)
                .collect();
            // Which connector absorbs the connector-time appearance of each unhelpful literal.
            let y_target = if !helpful[1] {
                if helpful[0] {
                    Some(1)
                } else if helpful[2] {
                    Some(2)
                } else {
                    None
                }
            } else {
                None
            };
            let conns = self.connectors(a);
            let mut forced_left = [false; 2];
            for (slot, role) in [Role::X, Role::Y, Role::Z].into_iter().enumerate() {
                let b = c.blocks[slot];
                let p = self.blocks[b].placement;
                let (edge_left, times) = attached_times(&p, c, helpful[slot]);
                let conn_time = conns[0].2;
                for t in times {
                    let v = if t == conn_time && !helpful[slot] {
                        let target = match role {
                            Role::X => Some(0),
                            Role::Z => Some(1),
                            Role::Y => y_target.map(|x| x - 1),
                        };
                        let Some(k) = target else { continue };
                        let (from, to, _) = conns[k];
                        if from == edge_left || from == edge_left + 1 {
                            forced_left[k] = true;
                            from
                        } else {
                            to
                        }
                    } else {
                        self.attached_endpoint(&p, c.sign, t, helpful[slot])
                    };
                    cover.insert(app(v, t));
                }
            }
            for k in 0..2 {
                let (from, to, time) = conns[k];
                let start = if forced_left[k] { from } else { from + 1 };
                cover.extend((start..=to).step_by(2).map(|v| app(v, time)));
            }
        }
        Ok(cover)
    }

    fn is_end_appearance(&self, p: &BlockPlacement, a: VertexAppearance) -> bool {
        a.time >= p.start_time && a.time < p.start_time + BLOCK_SPAN
    }

    /// Endpoint used for a non-connector appearance of an attached edge.
    fn attached_endpoint(&self, p: &BlockPlacement, sign: Sign, t: Time, helpful: bool) -> Vertex {
        let edge = match sign {
            Sign::Positive => 6,
            Sign::Negative => 0,
        };
        let middle = t == p.start_time + 1 || t == p.start_time + 7;
        // The helpful phase covers the attached edge on odd offsets, sharing the middle slots.
        if middle && helpful {
            inner(p, edge)
        } else {
            outer(p, edge)
        }
    }

    /// `(from, to, time)` of both connectors of clause `a`.
    fn connectors(&self, a: usize) -> [(Vertex, Vertex, Time); 2] {
        let mut out = [(0, 0, 0); 2];
        let mut k = 0;
        for fr in &self.layout.fragments {
            if let FragmentKind::Connector { clause, from, to, time } = fr.kind {
                if self.layout.fragments[clause].kind == self.clause_kind(a) {
                    out[k] = (from, to, time);
                    k += 1;
                }
            }
        }
        out
    }

    fn clause_kind(&self, a: usize) -> FragmentKind {
        let c = &self.clauses[a];
        FragmentKind::Clause { sign: c.sign, blocks: c.blocks, start: c.start }
    }

    /// Size of every cover produced by [`Self::assignment_to_cover`].
    pub fn canonical_size(&self) -> Result<usize> {
        Ok(self.assignment_to_cover(&vec![true; self.formula.n])?.len())
    }

    /// Appends a vertex `w` adjacent to both path ends at time 1.
    ///
    /// The returned target is `s + 1`; extend a cover with `(w, 1)`.
    pub fn to_cycle(&self) -> Result<(TemporalGraph, usize, VertexAppearance)> {
        let g = &self.instance;
        let w = g.num_vertices();
        let mut edges = g.edges().to_vec();
        edges.push(TemporalEdge::new(w - 1, w, vec![1]));
        edges.push(TemporalEdge::new(0, w, vec![1]));
        let cycle = TemporalGraph::with_lifetime(w + 1, edges, g.lifetime())?;
        Ok((cycle, self.s + 1, app(w, 1)))
    }
}

/// Times at which an attached literal edge is covered, with the left vertex of the edge.
///
/// In positive orientation (offsets from the block start, positive clause)
/// the edge is active at offsets `0..=L`, `L` odd. The helpful phase covers
/// it at 0 and every odd offset; the other phase at every even offset below
/// `L` and at `L`. Negative clauses use the mirror image `o -> 8 - o`.
fn attached_times(p: &BlockPlacement, c: &ClauseInfo, helpful: bool) -> (Vertex, Vec<Time>) {
    let t0 = p.start_time as i64;
    let (left, top) = match c.sign {
        Sign::Positive => (p.u(6), c.start as i64 + 3 - t0),
        Sign::Negative => (p.u(0), 8 + t0 - c.start as i64),
    };
    let offsets: Vec<i64> = if helpful {
        std::iter::once(0).chain((1..=top).step_by(2)).collect()
    } else {
        (0..top).step_by(2).chain(std::iter::once(top)).collect()
    };
    let times = offsets
        .into_iter()
        .map(|o| match c.sign {
            Sign::Positive => (t0 + o) as Time,
            Sign::Negative => (t0 + 8 - o) as Time,
        })
        .collect();
    (left, times)
}

/// Four appearances covering the bridge between `left` and the next block.
///
/// At `t + 2` the even-offset end edge of one block covers its bridge end; the
/// odd-offset end edge does so at `t + 5`.
fn bridge_cover(left: &BlockPlacement, phase: Phase) -> Vec<VertexAppearance> {
    let t = left.start_time;
    let w = |i: usize| left.u(7) + i;
    match phase {
        Phase::Green => vec![app(w(1), t + 2), app(w(3), t + 2), app(w(2), t + 5), app(w(4), t + 5)],
        Phase::Red => vec![app(w(2), t + 2), app(w(4), t + 2), app(w(1), t + 5), app(w(3), t + 5)],
    }
}
