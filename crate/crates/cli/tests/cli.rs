use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;
use tvc::instances::{parse_instance, parse_solution};
use tvc::oracle::solve_ids;

fn tvc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tvc")).current_dir(dir).args(args).output().unwrap()
}

fn status(dir: &Path, args: &[&str]) -> i32 {
    let out = tvc(dir, args);
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn block_witness_verifies() {
    let d = TempDir::new().unwrap();
    for phase in ["green", "red"] {
        assert_eq!(status(d.path(), &["gen", "gadget", "block", "--phase", phase, "--witness", "w", "-o", "b"]), 0);
        let w = parse_solution(&fs::read_to_string(d.path().join("w")).unwrap()).unwrap();
        assert_eq!(w.len(), 15);
        assert_eq!(status(d.path(), &["verify", "b", "w", "--delta", "2"]), 0);
    }
}

#[test]
fn dp_solutions_verify_through_files() {
    let d = TempDir::new().unwrap();
    let fixtures: &[&[&str]] = &[
        &["gen", "gadget", "block", "-o", "x"],
        &["gen", "gadget", "chain", "--size", "2", "-o", "x"],
        &["gen", "gadget", "vertical", "--size", "4", "-o", "x"],
        &["gen", "gadget", "clause", "-o", "x"],
        &["gen", "gadget", "clause-pinned", "-o", "x"],
        &["gen", "random", "--n", "6", "--t", "6", "--seed", "9", "-o", "x"],
    ];
    for gen in fixtures {
        assert_eq!(status(d.path(), gen), 0);
        assert_eq!(status(d.path(), &["solve", "x", "--algo", "dp", "--delta", "2", "-o", "s"]), 0, "{gen:?}");
        assert_eq!(status(d.path(), &["verify", "x", "s", "--delta", "2"]), 0, "{gen:?}");
    }
}

#[test]
fn json_report_schema() {
    let d = TempDir::new().unwrap();
    status(d.path(), &["gen", "random", "--n", "5", "--t", "5", "--seed", "1", "--topology", "cycle", "-o", "c"]);
    let out = tvc(d.path(), &["solve", "c", "--algo", "ptas", "--delta", "2", "--swap", "2", "--json", "--report", "r.json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
    keys.sort();
    assert_eq!(keys, ["algorithm", "delta", "params", "size", "time_ms", "verified"]);
    assert_eq!(v["algorithm"], "ptas");
    assert_eq!(v["params"]["swap"], 2);
    assert_eq!(v["verified"], true);
    let file: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(file["size"], v["size"]);
}

#[test]
fn greedy_reports_ignored_delta() {
    let d = TempDir::new().unwrap();
    status(d.path(), &["gen", "random", "--n", "6", "--t", "4", "--seed", "2", "--topology", "path", "-o", "p"]);
    let out = tvc(d.path(), &["solve", "p", "--algo", "greedy-tvc", "--delta", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["delta"], 4);
    assert_eq!(v["params"]["ignored_delta"], 2);
}

#[test]
fn exit_codes() {
    let d = TempDir::new().unwrap();
    let p = d.path();
    status(p, &["gen", "gadget", "block", "--phase", "red", "--witness", "w", "-o", "b"]);
    let w = fs::read_to_string(p.join("w")).unwrap();
    let first = w.lines().next().unwrap().len() + 1;
    fs::write(p.join("short"), &w[first..]).unwrap();
    assert_eq!(status(p, &["verify", "b", "short", "--delta", "2"]), 1);
    assert_eq!(status(p, &["solve", "b", "--algo", "fpt", "--delta", "2", "--k", "14"]), 3);
    assert_eq!(status(p, &["solve", "b", "--algo", "fpt", "--delta", "2", "--k", "15", "-o", "s"]), 0);
    assert_eq!(status(p, &["solve", "b", "--algo", "dp", "--delta", "2", "--guard", "5"]), 4);
    assert_eq!(status(p, &["solve", "b", "--algo", "oracle", "--delta", "2", "--budget", "10"]), 4);
    assert_eq!(status(p, &["solve", "b", "--algo", "dp", "--delta", "2", "--k", "3"]), 2);
    assert_eq!(status(p, &["solve", "b", "--algo", "fpt", "--delta", "2"]), 2);
    assert_eq!(status(p, &["solve", "b", "--algo", "dp"]), 2);
    assert_eq!(status(p, &["solve", "missing", "--algo", "dp", "--delta", "2"]), 2);
    status(p, &["gen", "random", "--n", "5", "--t", "3", "--edge-p", "1", "-o", "k5"]);
    assert_eq!(status(p, &["solve", "k5", "--algo", "ptas", "--delta", "2"]), 2);
    assert_eq!(status(p, &["solve", "k5", "--algo", "greedy-tvc"]), 2);
    let out = tvc(p, &["solve", "b", "--algo", "nope", "--delta", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    for id in ["oracle", "dp", "greedy-tvc", "ptas", "approx-d", "approx-d1", "fpt"] {
        assert!(err.contains(id), "{err}");
    }
}

#[test]
fn reduce_writes_instance_layout_and_witness() {
    let d = TempDir::new().unwrap();
    let p = d.path();
    fs::write(p.join("f"), "mono3sat 3 1\n+ 1 2 3\n").unwrap();
    let out = tvc(p, &["reduce", "f", "-o", "r", "--layout", "l.json", "--assign", "TFF", "--witness", "w"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "s 64");
    let g = parse_instance(&fs::read_to_string(p.join("r")).unwrap()).unwrap().graph;
    assert_eq!((g.num_vertices(), g.lifetime()), (32, 20));
    let layout: serde_json::Value = serde_json::from_str(&fs::read_to_string(p.join("l.json")).unwrap()).unwrap();
    assert_eq!(layout["blocks"].as_array().unwrap().len(), 3);
    assert_eq!(status(p, &["verify", "r", "w", "--delta", "2"]), 0);
    tvc(p, &["reduce", "f", "-o", "r", "--assign", "FFF", "--witness", "w"]);
    assert_eq!(status(p, &["verify", "r", "w", "--delta", "2"]), 1);
    let out = tvc(p, &["reduce", "f", "-o", "c", "--cycle", "--assign", "111", "--witness", "cw"]);
    assert_eq!(stdout(&out).trim(), "s 65");
    assert_eq!(status(p, &["verify", "c", "cw", "--delta", "2"]), 0);
}

fn bench_rows(p: &Path, threads: &str) -> Vec<csv::StringRecord> {
    let out = Command::new(env!("CARGO_BIN_EXE_tvc"))
        .current_dir(p)
        .env("TVC_THREADS", threads)
        .args(["bench", "m", "--algos", "dp,approx-d,approx-d1", "-o", "out.csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut r = csv::Reader::from_path(p.join("out.csv")).unwrap();
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        ["instance", "algorithm", "delta", "size", "optimum", "ratio", "time_ms", "explored"]
    );
    r.records().map(|x| x.unwrap()).collect()
}

#[test]
fn bench_ratios_on_degree_three_suite() {
    let d = TempDir::new().unwrap();
    let p = d.path();
    let mut manifest = String::new();
    for seed in 0..12 {
        let name = format!("g{seed}");
        let n = (5 + seed % 3).to_string();
        let gen = ["gen", "random", "--n", &n, "--t", "5", "--seed", &seed.to_string(), "--topology", "degree:3", "-o", &name];
        assert_eq!(status(p, &gen), 0);
        manifest.push_str(&format!("file {name} {name} 3\n"));
    }
    fs::write(p.join("m"), manifest).unwrap();
    let rows = bench_rows(p, "2");
    assert_eq!(rows.len(), 36);
    let mut degree_three = 0;
    for row in &rows {
        let g = parse_instance(&fs::read_to_string(p.join(&row[0])).unwrap()).unwrap().graph;
        let opt = solve_ids(&g, 3, None, None).unwrap().size;
        assert_eq!(row[4].parse::<usize>().unwrap(), opt);
        let size: usize = row[3].parse().unwrap();
        let ratio: f64 = row[5].parse().unwrap();
        if opt > 0 {
            assert!((ratio - size as f64 / opt as f64).abs() < 1e-9);
        }
        let deg = g.max_snapshot_degree();
        if deg == 3 && &row[1] == "approx-d1" {
            degree_three += 1;
            assert!(ratio <= 2.0, "{row:?}");
        }
    }
    assert!(degree_three > 0);
    let again = bench_rows(p, "1");
    let strip = |rows: &[csv::StringRecord]| -> Vec<Vec<String>> {
        rows.iter().map(|r| r.iter().enumerate().filter(|(i, _)| *i != 6).map(|(_, s)| s.to_string()).collect()).collect()
    };
    assert_eq!(strip(&rows), strip(&again));
}

#[test]
fn bench_skips_algorithms_outside_their_topology() {
    let d = TempDir::new().unwrap();
    fs::write(d.path().join("m"), "random a 6 5 1 2\nrandom b 6 4 2 2 cycle\n").unwrap();
    let out = tvc(d.path(), &["bench", "m", "--algos", "greedy-tvc,ptas"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(!text.contains("\na,"), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("b,")).count(), 2);
    assert_eq!(status(d.path(), &["bench", "m", "--algos", "fpt"]), 2);
}
