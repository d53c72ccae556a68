use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{TemporalEdge, TemporalGraph, Time, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Topology {
    General,
    /// The path `0 - 1 - ... - (n-1)`.
    Path,
    /// The cycle `0 - 1 - ... - (n-1) - 0`.
    Cycle,
    /// Random edges subject to an underlying degree cap.
    DegreeBounded(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomSpec {
    pub n: usize,
    /// Ignored for paths and cycles.
    pub edge_probability: f64,
    pub label_probability: f64,
    /// Lifetime of the produced graph.
    pub t_max: Time,
    pub seed: u64,
    pub topology: Topology,
}

impl RandomSpec {
    pub fn new(n: usize, t_max: Time, seed: u64, topology: Topology) -> Self {
        RandomSpec { n, edge_probability: 0.5, label_probability: 0.5, t_max, seed, topology }
    }
}

pub fn generate_random(spec: &RandomSpec) -> Result<TemporalGraph> {
    let bad = |m: &str| Err(Error::Generation(m.to_string()));
    if spec.n == 0 {
        return bad("n must be at least 1");
    }
    if spec.t_max == 0 {
        return bad("t_max must be at least 1");
    }
    for p in [spec.edge_probability, spec.label_probability] {
        if !(0.0..=1.0).contains(&p) {
            return bad("probabilities must lie in [0, 1]");
        }
    }
    if spec.label_probability == 0.0 {
        return bad("label probability 0 can never produce a label");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    let pairs: Vec<(Vertex, Vertex)> = match spec.topology {
        Topology::Path => (1..n).map(|i| (i - 1, i)).collect(),
        Topology::Cycle => {
            if n < 3 {
                return bad("a cycle needs at least 3 vertices");
            }
            (0..n).map(|i| (i, (i + 1) % n)).collect()
        }
        Topology::General => all_pairs(n)
            .into_iter()
            .filter(|_| rng.gen_bool(spec.edge_probability))
            .collect(),
        Topology::DegreeBounded(d) => {
            if d == 0 && n > 1 {
                return bad("degree bound 0 admits no edges");
            }
            let mut pairs = all_pairs(n);
            pairs.shuffle(&mut rng);
            let mut deg = vec![0usize; n];
            let mut kept = Vec::new();
            for (u, v) in pairs {
                if deg[u] < d && deg[v] < d && rng.gen_bool(spec.edge_probability) {
                    deg[u] += 1;
                    deg[v] += 1;
                    kept.push((u.min(v), u.max(v)));
                }
            }
            kept.sort_unstable();
            kept
        }
    };
    let edges = pairs
        .into_iter()
        .map(|(u, v)| {
            let labels = loop {
                let l: Vec<Time> =
                    (1..=spec.t_max).filter(|_| rng.gen_bool(spec.label_probability)).collect();
                if !l.is_empty() {
                    break l;
                }
            };
            TemporalEdge::new(u, v, labels)
        })
        .collect();
    TemporalGraph::with_lifetime(n, edges, spec.t_max)
}

fn all_pairs(n: usize) -> Vec<(Vertex, Vertex)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let spec = RandomSpec::new(6, 5, 42, Topology::General);
        assert_eq!(generate_random(&spec).unwrap(), generate_random(&spec).unwrap());
    }

    #[test]
    fn path_topology() {
        let g = generate_random(&RandomSpec::new(5, 4, 1, Topology::Path)).unwrap();
        let ends: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
        assert_eq!(ends, vec![(0, 1), (1, 2), (2, 3), (3, 4)]);
        assert_eq!(g.lifetime(), 4);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(generate_random(&RandomSpec::new(2, 4, 1, Topology::Cycle)).is_err());
        assert!(generate_random(&RandomSpec::new(4, 4, 1, Topology::DegreeBounded(0))).is_err());
        assert!(generate_random(&RandomSpec::new(0, 4, 1, Topology::General)).is_err());
        let mut s = RandomSpec::new(3, 4, 1, Topology::General);
        s.edge_probability = 1.5;
        assert!(generate_random(&s).is_err());
    }
}
