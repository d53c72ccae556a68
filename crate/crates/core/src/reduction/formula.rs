//! Monotone 3-CNF formulas with clause levels and occurrence indices.
//!
//! ```text
//! mono3sat <n> <m>
//! + i j k [level L] [g a b c]
//! - i j k [level L] [g a b c]
//! ```
//!
//! Variables are 1-based. Clause order is the embedding order: positive
//! clauses from the outermost inwards, then negative clauses from the
//! outermost inwards.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub sign: Sign,
    /// 1-based variables, strictly increasing.
    pub vars: [usize; 3],
    /// Positive for positive clauses, negative otherwise; `|level|` grows away from the variable axis.
    pub level: i64,
    /// 1-based copy of each variable's segment block used by this clause.
    pub occurrences: [usize; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotoneFormula {
    pub n: usize,
    pub clauses: Vec<Clause>,
}

impl MonotoneFormula {
    /// Checks levels, distinctness and occurrence permutations.
    pub fn new(n: usize, clauses: Vec<Clause>) -> Result<Self> {
        let f = MonotoneFormula { n, clauses };
        f.validate()?;
        Ok(f)
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    pub fn positive_count(&self) -> usize {
        self.clauses.iter().filter(|c| c.sign == Sign::Positive).count()
    }

    pub fn negative_count(&self) -> usize {
        self.m() - self.positive_count()
    }

    /// Number of occurrences `d_i` of every variable, index 0 unused.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n + 1];
        for c in &self.clauses {
            for &v in &c.vars {
                d[v] += 1;
            }
        }
        d
    }

    /// Whether `assignment[i - 1]` satisfies every clause.
    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| clause_satisfied(c, assignment))
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Formula(m));
        if self.clauses.is_empty() {
            return bad("formula has no clauses".into());
        }
        if self.n == 0 {
            return bad("formula has no variables".into());
        }
        let m1 = self.positive_count() as i64;
        let m2 = self.negative_count() as i64;
        let mut seen_levels = Vec::new();
        for (a, c) in self.clauses.iter().enumerate() {
            if c.vars[0] == 0 || c.vars[2] > self.n {
                return bad(format!("clause {}: variable out of range 1..={}", a + 1, self.n));
            }
            if !(c.vars[0] < c.vars[1] && c.vars[1] < c.vars[2]) {
                return bad(format!("clause {}: variables must be distinct and sorted", a + 1));
            }
            let ok = match c.sign {
                Sign::Positive => (1..=m1).contains(&c.level),
                Sign::Negative => (-m2..=-1).contains(&c.level),
            };
            if !ok {
                return bad(format!("clause {}: level {} out of range", a + 1, c.level));
            }
            if seen_levels.contains(&c.level) {
                return bad(format!("clause {}: level {} used twice", a + 1, c.level));
            }
            seen_levels.push(c.level);
        }
        let d = self.degrees();
        for v in 1..=self.n {
            if d[v] == 0 {
                return bad(format!("variable {v} occurs in no clause"));
            }
            let mut copies: Vec<usize> = self
                .clauses
                .iter()
                .flat_map(|c| (0..3).filter(move |&p| c.vars[p] == v).map(move |p| c.occurrences[p]))
                .collect();
            copies.sort_unstable();
            if copies != (1..=d[v]).collect::<Vec<_>>() {
                return bad(format!("occurrences of variable {v} are not a permutation of 1..={}", d[v]));
            }
        }
        Ok(())
    }
}

pub fn clause_satisfied(c: &Clause, assignment: &[bool]) -> bool {
    c.vars.iter().any(|&v| match c.sign {
        Sign::Positive => assignment[v - 1],
        Sign::Negative => !assignment[v - 1],
    })
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| perr(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| perr(line, format!("bad {what} `{tok}`")))
}

struct RawClause {
    sign: Sign,
    vars: [usize; 3],
    level: Option<i64>,
    occurrences: Option<[usize; 3]>,
}

pub fn parse_formula(text: &str) -> Result<MonotoneFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut raw = Vec::new();
    for (idx, line_text) in text.lines().enumerate() {
        let line = idx + 1;
        let body = line_text.split('#').next().unwrap_or("");
        let mut toks = body.split_whitespace();
        let Some(tag) = toks.next() else { continue };
        match tag {
            "mono3sat" => {
                if header.is_some() {
                    return Err(perr(line, "repeated header"));
                }
                header = Some((num(toks.next(), line, "variable count")?, num(toks.next(), line, "clause count")?));
            }
            "+" | "-" => {
                if header.is_none() {
                    return Err(perr(line, "clause before `mono3sat` header"));
                }
                let sign = if tag == "+" { Sign::Positive } else { Sign::Negative };
                let vars = [
                    num(toks.next(), line, "variable")?,
                    num(toks.next(), line, "variable")?,
                    num(toks.next(), line, "variable")?,
                ];
                let mut level = None;
                let mut occurrences = None;
                while let Some(key) = toks.next() {
                    match key {
                        "level" => level = Some(num(toks.next(), line, "level")?),
                        "g" => {
                            occurrences = Some([
                                num(toks.next(), line, "occurrence")?,
                                num(toks.next(), line, "occurrence")?,
                                num(toks.next(), line, "occurrence")?,
                            ])
                        }
                        other => return Err(perr(line, format!("unexpected token `{other}`"))),
                    }
                }
                raw.push(RawClause { sign, vars, level, occurrences });
            }
            other => return Err(perr(line, format!("unknown record `{other}`"))),
        }
    }
    let (n, m) = header.ok_or_else(|| perr(0, "missing `mono3sat` header"))?;
    if raw.len() != m {
        return Err(perr(0, format!("header declares {m} clauses, found {}", raw.len())));
    }
    build(n, raw)
}

fn build(n: usize, raw: Vec<RawClause>) -> Result<MonotoneFormula> {
    let m1 = raw.iter().filter(|c| c.sign == Sign::Positive).count() as i64;
    let m2 = raw.len() as i64 - m1;
    let (mut pos_seen, mut neg_seen) = (0i64, 0i64);
    let mut clauses = Vec::with_capacity(raw.len());
    for (a, r) in raw.iter().enumerate() {
        let default_level = match r.sign {
            Sign::Positive => {
                pos_seen += 1;
                m1 - pos_seen + 1
            }
            Sign::Negative => {
                neg_seen += 1;
                -(m2 - neg_seen + 1)
            }
        };
        let mut order = [0usize, 1, 2];
        order.sort_by_key(|&p| r.vars[p]);
        let vars = order.map(|p| r.vars[p]);
        if vars[0] == vars[1] || vars[1] == vars[2] {
            return Err(Error::Formula(format!("clause {}: repeated variable", a + 1)));
        }
        let occurrences = r.occurrences.map_or([0; 3], |g| order.map(|p| g[p]));
        clauses.push(Clause { sign: r.sign, vars, level: r.level.unwrap_or(default_level), occurrences });
    }
    for (a, c) in clauses.iter().enumerate() {
        if c.vars[2] > n || c.vars[0] == 0 {
            return Err(Error::Formula(format!("clause {}: variable out of range 1..={n}", a + 1)));
        }
    }
    // Explicit occurrences are kept; the rest fill the unused copies.
    let mut used: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (a, c) in clauses.iter().enumerate() {
        if raw[a].occurrences.is_some() {
            for p in 0..3 {
                let g = c.occurrences[p];
                if g == 0 || used[c.vars[p]].contains(&g) {
                    return Err(Error::Formula(format!(
                        "clause {}: occurrence {g} of variable {} is invalid or reused",
                        a + 1,
                        c.vars[p]
                    )));
                }
                used[c.vars[p]].push(g);
            }
        }
    }
    // Left to right along a variable: clauses ending there (inner first), the
    // clause through it, then clauses starting there (outer first). Any
    // interleaving of the two signs is planar.
    let mut slots: Vec<Vec<(usize, i64, usize, usize)>> = vec![Vec::new(); n + 1];
    for (a, c) in clauses.iter().enumerate() {
        if raw[a].occurrences.is_some() {
            continue;
        }
        let lv = c.level.abs();
        for (p, key) in [(2, lv), (1, 0), (0, -lv)] {
            slots[c.vars[p]].push((2 - p, key, a, p));
        }
    }
    for (v, list) in slots.iter_mut().enumerate() {
        list.sort_unstable();
        for &(_, _, a, p) in list.iter() {
            let g = (1..).find(|g| !used[v].contains(g)).unwrap();
            used[v].push(g);
            clauses[a].occurrences[p] = g;
        }
    }
    MonotoneFormula::new(n, clauses)
}
