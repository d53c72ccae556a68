//! Benchmark suites.
//!
//! A manifest has one entry per line; `#` starts a comment and relative
//! paths are resolved against the manifest's directory:
//!
//! ```text
//! file <name> <path> <delta>
//! random <name> <n> <t> <seed> <delta> [general|path|cycle|degree:<k>]
//! ```

use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use tvc::exact_dp;
use tvc::instances::{generate_random, parse_instance, InstanceDocument, RandomSpec, Topology};
use tvc::{Error, Time};

use crate::run::{execute, Algorithm, Params, RunConfig};
use crate::Failure;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub instance: String,
    pub algorithm: String,
    pub delta: Time,
    pub size: usize,
    pub optimum: Option<usize>,
    pub ratio: Option<f64>,
    pub time_ms: f64,
    pub explored: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub name: String,
    pub source: Source,
    pub delta: Time,
}

#[derive(Debug, Clone)]
pub enum Source {
    File(PathBuf),
    Random(RandomSpec),
}

pub fn parse_topology(s: &str) -> Result<Topology, String> {
    match s {
        "general" => Ok(Topology::General),
        "path" => Ok(Topology::Path),
        "cycle" => Ok(Topology::Cycle),
        _ => match s.strip_prefix("degree:").map(str::parse) {
            Some(Ok(k)) => Ok(Topology::DegreeBounded(k)),
            _ => Err(format!("unknown topology `{s}` (general, path, cycle, degree:<k>)")),
        },
    }
}

pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<Entry>, Failure> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
        let bad = |msg: &str| Failure::usage(format!("manifest line {line}: {msg}"));
        let num = |i: usize, what: &str| -> Result<u64, Failure> {
            toks.get(i).and_then(|t| t.parse().ok()).ok_or_else(|| bad(&format!("bad or missing {what}")))
        };
        match toks.first() {
            None => continue,
            Some(&"file") => {
                if toks.len() != 4 {
                    return Err(bad("expected `file <name> <path> <delta>`"));
                }
                entries.push(Entry {
                    name: toks[1].to_string(),
                    source: Source::File(base.join(toks[2])),
                    delta: num(3, "delta")? as Time,
                });
            }
            Some(&"random") => {
                if !(6..=7).contains(&toks.len()) {
                    return Err(bad("expected `random <name> <n> <t> <seed> <delta> [topology]`"));
                }
                let topology = match toks.get(6) {
                    Some(t) => parse_topology(t).map_err(|e| bad(&e))?,
                    None => Topology::General,
                };
                let spec = RandomSpec::new(num(2, "n")? as usize, num(3, "t")? as Time, num(4, "seed")?, topology);
                entries.push(Entry { name: toks[1].to_string(), source: Source::Random(spec), delta: num(5, "delta")? as Time });
            }
            Some(other) => return Err(bad(&format!("unknown entry kind `{other}`"))),
        }
    }
    Ok(entries)
}

fn load(entry: &Entry) -> Result<InstanceDocument, Failure> {
    match &entry.source {
        Source::File(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            Ok(parse_instance(&text)?)
        }
        Source::Random(spec) => {
            let mut doc = InstanceDocument::new(generate_random(spec)?);
            doc.metadata.seed = Some(spec.seed);
            Ok(doc)
        }
    }
}

fn optimum(doc: &InstanceDocument, delta: Time) -> Option<usize> {
    let r = match doc.bounds_for(delta).ok()? {
        Some(b) => exact_dp::solve_partial(&doc.graph, delta, &b),
        None => exact_dp::solve(&doc.graph, delta),
    };
    r.ok().map(|r| r.size)
}

fn bench_entry(entry: &Entry, algos: &[Algorithm]) -> Result<Vec<BenchRecord>, Failure> {
    let doc = load(entry)?;
    let mut optima: Vec<(Time, Option<usize>)> = Vec::new();
    let mut rows = Vec::new();
    for &algorithm in algos {
        let cfg = RunConfig { algorithm, delta: Some(entry.delta), params: Params::default() };
        let out = match execute(&doc, &cfg) {
            Err(f) if matches!(f.source, Some(Error::Topology { .. })) => continue,
            other => other?,
        };
        let optimum = match optima.iter().find(|(d, _)| *d == out.delta) {
            Some(&(_, o)) => o,
            None => {
                let o = optimum(&doc, out.delta);
                optima.push((out.delta, o));
                o
            }
        };
        let size = out.cover.map(|c| c.len()).unwrap_or_default();
        let ratio = optimum.map(|o| if o == 0 { 1.0 } else { size as f64 / o as f64 });
        rows.push(BenchRecord {
            instance: entry.name.clone(),
            algorithm: algorithm.id().to_string(),
            delta: out.delta,
            size,
            optimum,
            ratio,
            time_ms: out.time_ms,
            explored: out.explored,
        });
    }
    Ok(rows)
}

/// Runs every entry with every algorithm; rows keep manifest order.
pub fn run_suite(entries: &[Entry], algos: &[Algorithm], threads: Option<usize>) -> Result<Vec<BenchRecord>, Failure> {
    if algos.contains(&Algorithm::Fpt) {
        return Err(Failure::usage("fpt needs a per-instance --k and cannot be benchmarked"));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| Failure::usage(e.to_string()))?;
    let per_entry: Vec<_> = pool.install(|| entries.par_iter().map(|e| bench_entry(e, algos)).collect());
    let mut rows = Vec::new();
    for r in per_entry {
        rows.extend(r?);
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[BenchRecord], out: W) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Failure::usage(e.to_string()))?;
    }
    w.flush().map_err(|e| Failure::usage(e.to_string()))?;
    Ok(())
}
