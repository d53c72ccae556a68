mod bench;
mod run;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tvc::instances::{
    generate_random, parse_instance, parse_solution, serialize_instance, serialize_solution, InstanceDocument,
    RandomSpec,
};
use tvc::reduction::{
    block_chain, canonical_block_cover, layout::BlockPlacement, miniature_clause, parse_formula, reduce_formula,
    segment_block, vertical_gadget, Phase,
};
use tvc::{Error, Time};

use run::{Algorithm, Params, RunConfig};

/// Exit statuses.
const OK: u8 = 0;
const INVALID: u8 = 1;
const USAGE: u8 = 2;
const ABSENT: u8 = 3;
const GUARD: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
    pub source: Option<Error>,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: USAGE, message: message.into(), source: None }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::StateSpace { .. } | Error::OracleTooLarge { .. } | Error::Timeout { .. } => GUARD,
            _ => USAGE,
        };
        Failure { code, message: e.to_string(), source: Some(e) }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Parser)]
#[command(name = "tvc", version, about = "Solvers and tools for temporal vertex cover in sliding windows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and write the cover.
    Solve(SolveArgs),
    /// Check a cover; exits 1 when some window leaves an edge uncovered.
    Verify(VerifyArgs),
    /// Write a generated instance.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Turn a planar monotone 3SAT formula into a temporal path instance.
    Reduce(ReduceArgs),
    /// Run algorithms over a suite manifest and write CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, value_enum)]
    algo: Algorithm,
    #[arg(long)]
    delta: Option<Time>,
    /// ptas: target ratio 1 + epsilon; sets the swap size to ceil(1/epsilon^2).
    #[arg(long)]
    epsilon: Option<f64>,
    /// ptas: largest number of points a swap removes.
    #[arg(long)]
    swap: Option<usize>,
    /// ptas: shuffle the swap enumeration order.
    #[arg(long)]
    seed: Option<u64>,
    /// fpt: solution size bound.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    phase1_gap: Option<Time>,
    #[arg(long)]
    phase2_gap: Option<Time>,
    /// dp: maximum number of memoized states.
    #[arg(long)]
    guard: Option<usize>,
    /// oracle, fpt: maximum number of search nodes.
    #[arg(long)]
    budget: Option<u64>,
    /// Solution file; stdout when omitted and --json is not given.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Print the JSON report on stdout.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    instance: PathBuf,
    solution: PathBuf,
    #[arg(long)]
    delta: Time,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum GenKind {
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: Time,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// general, path, cycle or degree:<k>
        #[arg(long, default_value = "general", value_parser = bench::parse_topology)]
        topology: tvc::instances::Topology,
        #[arg(long, default_value_t = 0.5)]
        edge_p: f64,
        #[arg(long, default_value_t = 0.5)]
        label_p: f64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    Gadget {
        #[arg(value_enum)]
        kind: Gadget,
        /// Blocks in a chain, or k for a vertical gadget.
        #[arg(long, default_value_t = 2)]
        size: usize,
        /// block: also write the canonical cover of this phase.
        #[arg(long, value_enum, requires = "witness")]
        phase: Option<PhaseArg>,
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Gadget {
    Block,
    Chain,
    Vertical,
    Clause,
    ClausePinned,
}

#[derive(Clone, Copy, ValueEnum)]
enum PhaseArg {
    Green,
    Red,
}

#[derive(Args)]
struct ReduceArgs {
    formula: PathBuf,
    #[arg(short, long)]
    out: PathBuf,
    /// Write blocks, clauses and the fragment layout as JSON.
    #[arg(long)]
    layout: Option<PathBuf>,
    /// Truth values as a string of T/F or 1/0, one per variable.
    #[arg(long, requires = "witness")]
    assign: Option<String>,
    #[arg(long)]
    witness: Option<PathBuf>,
    /// Close the path into a cycle with one extra vertex.
    #[arg(long)]
    cycle: bool,
}

#[derive(Args)]
struct BenchArgs {
    manifest: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "dp,approx-d,approx-d1")]
    algos: Vec<Algorithm>,
    /// CSV file; stdout when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Report<'a> {
    algorithm: &'a str,
    delta: Time,
    size: Option<usize>,
    time_ms: f64,
    params: &'a Params,
    verified: Option<bool>,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &Path) -> Result<InstanceDocument, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn solve(a: SolveArgs) -> Result<u8, Failure> {
    let doc = load_instance(&a.instance)?;
    let cfg = RunConfig {
        algorithm: a.algo,
        delta: a.delta,
        params: Params {
            epsilon: a.epsilon,
            swap: a.swap,
            seed: a.seed,
            k: a.k,
            phase1_gap: a.phase1_gap,
            phase2_gap: a.phase2_gap,
            guard: a.guard,
            budget: a.budget,
            ignored_delta: None,
        },
    };
    let out = run::execute(&doc, &cfg)?;
    let verified = match &out.cover {
        Some(c) => Some(run::verify(&doc, out.delta, c)?.valid),
        None => None,
    };
    let report = Report {
        algorithm: a.algo.id(),
        delta: out.delta,
        size: out.cover.as_ref().map(|c| c.len()),
        time_ms: out.time_ms,
        params: &out.params,
        verified,
    };
    let json = serde_json::to_string_pretty(&report).map_err(|e| Failure::usage(e.to_string()))?;
    if let Some(p) = &a.report {
        write(p, &(json.clone() + "\n"))?;
    }
    if let Some(d) = out.params.ignored_delta {
        eprintln!("note: greedy-tvc solves with delta = T = {}; --delta {d} ignored", out.delta);
    }
    let Some(cover) = out.cover else {
        if a.json {
            println!("{json}");
        }
        eprintln!("no cover of size at most {}", out.params.k.unwrap_or_default());
        return Ok(ABSENT);
    };
    if a.json {
        println!("{json}");
        if let Some(p) = &a.out {
            write(p, &serialize_solution(&cover))?;
        }
    } else {
        emit(a.out.as_deref(), &serialize_solution(&cover))?;
        eprintln!("{}: size {} (delta {}, {:.3} ms)", a.algo.id(), cover.len(), out.delta, out.time_ms);
    }
    Ok(if verified == Some(true) { OK } else { INVALID })
}

fn verify(a: VerifyArgs) -> Result<u8, Failure> {
    let doc = load_instance(&a.instance)?;
    let cover = parse_solution(&read(&a.solution)?)
        .map_err(|e| Failure::usage(format!("{}: {e}", a.solution.display())))?;
    let rep = run::verify(&doc, a.delta, &cover)?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&rep).map_err(|e| Failure::usage(e.to_string()))?);
    } else if rep.valid {
        println!("valid: {} appearances", cover.len());
    } else {
        println!("invalid: {} uncovered (window, edge) pairs", rep.violations.len());
        for v in &rep.violations {
            let e = doc.graph.edge(v.edge);
            println!("window {} edge {} ({}-{})", v.window, v.edge, e.u, e.v);
        }
    }
    Ok(if rep.valid { OK } else { INVALID })
}

fn gen(kind: GenKind) -> Result<u8, Failure> {
    match kind {
        GenKind::Random { n, t, seed, topology, edge_p, label_p, out } => {
            let spec = RandomSpec { edge_probability: edge_p, label_probability: label_p, ..RandomSpec::new(n, t, seed, topology) };
            let mut doc = InstanceDocument::new(generate_random(&spec)?);
            doc.metadata.seed = Some(seed);
            emit(out.as_deref(), &serialize_instance(&doc))?;
        }
        GenKind::Gadget { kind, size, phase, witness, out } => {
            let (g, bounds) = match kind {
                Gadget::Block => (segment_block(2, 11)?, None),
                Gadget::Chain => (block_chain(size, 2, 11)?, None),
                Gadget::Vertical => {
                    let (g, b) = vertical_gadget(size)?;
                    (g, Some(b))
                }
                Gadget::Clause | Gadget::ClausePinned => {
                    let (g, b) = miniature_clause(matches!(kind, Gadget::ClausePinned))?;
                    (g, Some(b))
                }
            };
            let mut doc = InstanceDocument::new(g);
            if let Some(b) = &bounds {
                doc.set_bounds(b);
            }
            emit(out.as_deref(), &serialize_instance(&doc))?;
            if let (Some(p), Some(w)) = (phase, witness) {
                if !matches!(kind, Gadget::Block) {
                    return Err(Failure::usage("--phase is only defined for block"));
                }
                let phase = match p {
                    PhaseArg::Green => Phase::Green,
                    PhaseArg::Red => Phase::Red,
                };
                let c = canonical_block_cover(&BlockPlacement { start_vertex: 0, start_time: 2 }, phase);
                write(&w, &serialize_solution(&c))?;
            }
        }
    }
    Ok(OK)
}

fn parse_assignment(s: &str) -> Result<Vec<bool>, Failure> {
    s.chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| match c {
            'T' | 't' | '1' => Ok(true),
            'F' | 'f' | '0' => Ok(false),
            _ => Err(Failure::usage(format!("bad truth value `{c}` in --assign"))),
        })
        .collect()
}

fn reduce(a: ReduceArgs) -> Result<u8, Failure> {
    let text = read(&a.formula)?;
    let f = parse_formula(&text).map_err(|e| Failure::usage(format!("{}: {e}", a.formula.display())))?;
    let r = reduce_formula(&f)?;
    let (graph, s, extra) = if a.cycle {
        let (g, s, x) = r.to_cycle()?;
        (g, s, Some(x))
    } else {
        (r.instance.clone(), r.s, None)
    };
    let mut doc = InstanceDocument::new(graph);
    doc.metadata.comment = Some(format!("target size {s}"));
    write(&a.out, &serialize_instance(&doc))?;
    if let Some(p) = &a.layout {
        let json = serde_json::to_string_pretty(&r).map_err(|e| Failure::usage(e.to_string()))?;
        write(p, &(json + "\n"))?;
    }
    if let (Some(s), Some(w)) = (&a.assign, &a.witness) {
        let assignment = parse_assignment(s)?;
        let mut cover = r.assignment_to_cover(&assignment)?;
        if let Some(x) = extra {
            cover.insert(x);
        }
        if !f.is_satisfied_by(&assignment) {
            eprintln!("note: the assignment does not satisfy the formula, so the witness is not a cover");
        }
        write(w, &serialize_solution(&cover))?;
    }
    println!("s {s}");
    Ok(OK)
}

fn bench(a: BenchArgs) -> Result<u8, Failure> {
    let base = a.manifest.parent().unwrap_or(Path::new("."));
    let entries = bench::parse_manifest(&read(&a.manifest)?, base)?;
    let threads = match std::env::var("TVC_THREADS") {
        Ok(v) => Some(v.parse().map_err(|_| Failure::usage(format!("TVC_THREADS must be a number, got `{v}`")))?),
        Err(_) => None,
    };
    let rows = bench::run_suite(&entries, &a.algos, threads)?;
    match &a.out {
        Some(p) => {
            let f = fs::File::create(p).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?;
            bench::write_csv(&rows, f)?;
        }
        None => bench::write_csv(&rows, std::io::stdout().lock())?,
    }
    Ok(OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Verify(a) => verify(a),
        Command::Gen { kind } => gen(kind),
        Command::Reduce(a) => reduce(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}
