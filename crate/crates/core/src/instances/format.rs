//! Text formats.
//!
//! Instance:
//!
//! ```text
//! tg <n> <m> [T]
//! e <u> <v> <k> <t1> ... <tk>
//! p <edge> <l> <h>
//! ```
//!
//! The optional `T` declares a lifetime longer than the largest label. Edges
//! without a `p` line are obligated in every window. Everything after `#` is
//! a comment; `# name:`, `# seed:` and `# comment:` lines are kept as metadata.
//!
//! Solution: one `<v> <t>` pair per line.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{
    EdgeId, PartialBounds, TemporalEdge, TemporalGraph, TemporalVertexSet, Time, VertexAppearance,
};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Metadata {
    pub name: Option<String>,
    pub seed: Option<u64>,
    pub comment: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceDocument {
    pub graph: TemporalGraph,
    /// Explicit `(edge, l, h)` entries, sorted by edge.
    pub bounds: Vec<(EdgeId, usize, usize)>,
    pub metadata: Metadata,
}

impl InstanceDocument {
    pub fn new(graph: TemporalGraph) -> Self {
        InstanceDocument { graph, bounds: Vec::new(), metadata: Metadata::default() }
    }

    /// Bounds for window length `delta`; `None` when the file has no `p` lines.
    pub fn bounds_for(&self, delta: Time) -> Result<Option<PartialBounds>> {
        if self.bounds.is_empty() {
            return Ok(None);
        }
        let mut b = PartialBounds::full(&self.graph, delta)?;
        for &(e, l, h) in &self.bounds {
            b.set(e, l, h);
        }
        b.validate(&self.graph, delta)?;
        Ok(Some(b))
    }

    /// Records every edge's bounds explicitly.
    pub fn set_bounds(&mut self, bounds: &PartialBounds) {
        self.bounds = bounds.as_slice().iter().enumerate().map(|(e, &(l, h))| (e, l, h)).collect();
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn number<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
}

pub fn parse_instance(text: &str) -> Result<InstanceDocument> {
    let mut header: Option<(usize, usize, Option<Time>)> = None;
    let mut edges = Vec::new();
    let mut bounds: Vec<(EdgeId, usize, usize)> = Vec::new();
    let mut metadata = Metadata::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let (body, comment) = match raw.find('#') {
            Some(p) => (&raw[..p], Some(raw[p + 1..].trim())),
            None => (raw, None),
        };
        if let Some(c) = comment {
            if let Some(v) = c.strip_prefix("name:") {
                metadata.name = Some(v.trim().to_string());
            } else if let Some(v) = c.strip_prefix("seed:") {
                metadata.seed = Some(number(Some(v.trim()), line, "seed")?);
            } else if let Some(v) = c.strip_prefix("comment:") {
                metadata.comment = Some(v.trim().to_string());
            }
        }
        let mut toks = body.split_whitespace();
        let Some(tag) = toks.next() else { continue };
        match tag {
            "tg" => {
                if header.is_some() {
                    return Err(parse_err(line, "repeated `tg` header"));
                }
                let n = number(toks.next(), line, "vertex count")?;
                let m = number(toks.next(), line, "edge count")?;
                let t = toks.next().map(|s| number(Some(s), line, "lifetime")).transpose()?;
                header = Some((n, m, t));
            }
            "e" => {
                if header.is_none() {
                    return Err(parse_err(line, "edge before `tg` header"));
                }
                let u = number(toks.next(), line, "endpoint")?;
                let v = number(toks.next(), line, "endpoint")?;
                let k: usize = number(toks.next(), line, "label count")?;
                let labels = (0..k)
                    .map(|_| number(toks.next(), line, "label"))
                    .collect::<Result<Vec<Time>>>()?;
                edges.push(TemporalEdge::new(u, v, labels));
            }
            "p" => {
                if header.is_none() {
                    return Err(parse_err(line, "bounds before `tg` header"));
                }
                let e = number(toks.next(), line, "edge index")?;
                let l = number(toks.next(), line, "low window")?;
                let h = number(toks.next(), line, "high window")?;
                if bounds.iter().any(|b| b.0 == e) {
                    return Err(parse_err(line, format!("repeated bounds for edge {e}")));
                }
                bounds.push((e, l, h));
            }
            other => return Err(parse_err(line, format!("unknown record `{other}`"))),
        }
        if let Some(extra) = toks.next() {
            return Err(parse_err(line, format!("unexpected token `{extra}`")));
        }
    }
    let (n, m, t) = header.ok_or_else(|| parse_err(0, "missing `tg` header"))?;
    if edges.len() != m {
        return Err(parse_err(0, format!("header declares {m} edges, found {}", edges.len())));
    }
    let graph = match t {
        Some(t) => TemporalGraph::with_lifetime(n, edges, t)?,
        None => TemporalGraph::new(n, edges)?,
    };
    for &(e, l, h) in &bounds {
        if e >= m {
            return Err(Error::EdgeOutOfRange { index: e, m });
        }
        if l == 0 || l > h {
            return Err(Error::InvalidBounds { edge: e, low: l, high: h, max: graph.lifetime() });
        }
    }
    bounds.sort_unstable();
    Ok(InstanceDocument { graph, bounds, metadata })
}

pub fn serialize_instance(doc: &InstanceDocument) -> String {
    let g = &doc.graph;
    let mut out = format!("tg {} {}", g.num_vertices(), g.num_edges());
    if g.lifetime() > g.max_label() {
        let _ = write!(out, " {}", g.lifetime());
    }
    out.push('\n');
    if let Some(name) = &doc.metadata.name {
        let _ = writeln!(out, "# name: {name}");
    }
    if let Some(seed) = doc.metadata.seed {
        let _ = writeln!(out, "# seed: {seed}");
    }
    if let Some(c) = &doc.metadata.comment {
        let _ = writeln!(out, "# comment: {c}");
    }
    for e in g.edges() {
        let _ = write!(out, "e {} {} {}", e.u, e.v, e.labels.len());
        for t in &e.labels {
            let _ = write!(out, " {t}");
        }
        out.push('\n');
    }
    let mut bounds = doc.bounds.clone();
    bounds.sort_unstable();
    for (e, l, h) in bounds {
        let _ = writeln!(out, "p {e} {l} {h}");
    }
    out
}

pub fn parse_solution(text: &str) -> Result<TemporalVertexSet> {
    let mut set = TemporalVertexSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        let mut toks = body.split_whitespace();
        let Some(first) = toks.next() else { continue };
        let v = number(Some(first), line, "vertex")?;
        let t = number(toks.next(), line, "time")?;
        if let Some(extra) = toks.next() {
            return Err(parse_err(line, format!("unexpected token `{extra}`")));
        }
        if !set.insert(VertexAppearance::new(v, t)) {
            return Err(parse_err(line, format!("duplicate appearance ({v}, {t})")));
        }
    }
    Ok(set)
}

pub fn serialize_solution(cover: &TemporalVertexSet) -> String {
    let mut out = String::new();
    for a in cover {
        let _ = writeln!(out, "{} {}", a.vertex, a.time);
    }
    out
}
