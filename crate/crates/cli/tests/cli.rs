use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_removal-lab"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, contents).unwrap();
    p
}

const TRIANGLE: &str = "3 3\n0 1\n0 2\n1 2\n";
const K4: &str = "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";
const SQUARE: &str = "4 4\n0 1\n1 2\n2 3\n0 3\n";
const BOWTIE: &str = "5 6\n0 1\n0 2\n0 3\n0 4\n1 2\n3 4\n";

fn tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.insert(rel, fs::read(&p).unwrap());
            }
        }
    }
    out
}

#[test]
fn usage_errors_exit_two() {
    let t = tempfile::tempdir().unwrap();
    assert_eq!(code(&run_in(t.path(), &[])), 2);
    assert_eq!(code(&run_in(t.path(), &["count", "missing.txt"])), 2);
    assert_eq!(code(&run_in(t.path(), &["analyze", "missing.txt"])), 2);
    write(t.path(), "bad.txt", "3 2\n0 1\n");
    assert_eq!(code(&run_in(t.path(), &["analyze", "bad.txt"])), 2);
    assert_eq!(code(&run_in(t.path(), &["construct", "no-such"])), 2);
    write(t.path(), "empty.json", "{\"experiments\": []}");
    assert_eq!(code(&run_in(t.path(), &["run", "empty.json"])), 2);
    assert_eq!(code(&run_in(t.path(), &["--help"])), 0);
}

#[test]
fn hom_exit_codes() {
    let t = tempfile::tempdir().unwrap();
    write(t.path(), "c3.txt", TRIANGLE);
    write(t.path(), "k4.txt", K4);
    write(t.path(), "c4.txt", SQUARE);
    let yes = run_in(t.path(), &["hom", "c3.txt", "k4.txt", "--witness"]);
    assert_eq!(code(&yes), 0);
    assert!(stdout(&yes).contains("map "));
    assert_eq!(code(&run_in(t.path(), &["hom", "c3.txt", "c4.txt"])), 1);
    assert_eq!(code(&run_in(t.path(), &["hom", "c4.txt", "c3.txt"])), 0);
}

#[test]
fn count_variants() {
    let t = tempfile::tempdir().unwrap();
    write(t.path(), "c3.txt", TRIANGLE);
    write(t.path(), "k4.txt", K4);
    let o = run_in(t.path(), &["count", "c3.txt", "k4.txt"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("copies 24\ndensity 0.375\n"));
    let o = run_in(t.path(), &["count", "c3.txt", "k4.txt", "--anchor", "0", "1", "2", "3"]);
    assert!(stdout(&o).starts_with("copies 2\n"));
    write(t.path(), "parts.txt", "0\n1 2\n2 3\n");
    let o = run_in(t.path(), &["count", "c3.txt", "k4.txt", "--parts", "parts.txt"]);
    assert!(stdout(&o).starts_with("copies 3\n"), "{}", stdout(&o));
    let o = run_in(t.path(), &["count", "c3.txt", "k4.txt", "--blowup", "1,1,2"]);
    assert!(stdout(&o).starts_with("copies 24\n"));
    let o = run_in(t.path(), &["--json", "--seed", "9", "count", "c3.txt", "k4.txt"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["value"], "24");
    assert_eq!(v["params"]["seed"], 9);
    assert_eq!(v["passed"], true);
}

#[test]
fn corpus_is_byte_identical_and_lists_invariants() {
    let t = tempfile::tempdir().unwrap();
    for dir in ["a", "b"] {
        let o = run_in(t.path(), &["corpus", "--seed", "11", "--out", dir]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let a = tree(&t.path().join("a"));
    assert_eq!(a, tree(&t.path().join("b")));
    assert!(a.len() > 30);
    let manifest: Value = serde_json::from_slice(&a["manifest.json"]).unwrap();
    let graphs = manifest["graphs"].as_array().unwrap();
    let find = |name: &str| graphs.iter().find(|g| g["name"] == name).unwrap().clone();
    assert_eq!(find("cycle-9")["chi"], 3);
    assert_eq!(find("petersen")["odd_girth"], 5);
    let csv = String::from_utf8(a["manifest.csv"].clone()).unwrap();
    assert!(csv.starts_with("name,family,n,m,min_degree,max_degree,odd_girth,bipartite,chi,packing_size\n"));
}

#[test]
fn construct_writes_artifacts_and_audits() {
    let t = tempfile::tempdir().unwrap();
    let o = run_in(
        t.path(),
        &["construct", "padded-rs", "--k", "1", "--n", "300", "--alpha", "0.2", "--m", "20", "--out", "lemma"],
    );
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let dir = t.path().join("lemma");
    for f in ["graph.txt", "partition.txt", "packing.txt", "params.json", "report.json", "report.csv"] {
        assert!(dir.join(f).exists(), "{f} missing");
    }
    let params: Value = serde_json::from_str(&fs::read_to_string(dir.join("params.json")).unwrap()).unwrap();
    assert_eq!(params["params"]["n"], 300);
    assert_eq!(params["params"]["m"], 20);
    let report = fs::read_to_string(dir.join("report.csv")).unwrap();
    assert_eq!(report.lines().count(), 4);
    assert!(report.lines().skip(1).all(|l| l.contains(",true,")));
    let graph = fs::read_to_string(dir.join("graph.txt")).unwrap();
    assert!(graph.starts_with("300 "));
    let list = run_in(t.path(), &["construct", "--list"]);
    assert!(stdout(&list).contains("turan-regular"));
}

#[test]
fn estimate_sweep_emits_one_row_per_eps() {
    let t = tempfile::tempdir().unwrap();
    write(t.path(), "bowtie.txt", BOWTIE);
    let o = run_in(
        t.path(),
        &["estimate", "bowtie.txt", "--gamma", "0.5", "--sweep", "0.04,0.06,0.08,0.1,0.12", "--n", "60", "--out", "est"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(t.path().join("est/report.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "instance,n,gamma_realized,eps_realized,copies,copy_density");
    assert_eq!(lines.len(), 6);
    assert!(stdout(&o).starts_with(&csv));
    // Infeasible gamma is an audit failure of the instances.
    let o = run_in(t.path(), &["estimate", "bowtie.txt", "--gamma", "0.9", "--sweep", "0.1", "--n", "60"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn cleanup_and_decompose() {
    let t = tempfile::tempdir().unwrap();
    write(t.path(), "k4.txt", K4);
    let o = run_in(t.path(), &["cleanup", "k4.txt", "--k", "1", "--alpha", "0.5", "--out", "cl"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("cut_edges 3"));
    assert!(t.path().join("cl/residual.txt").exists());
    write(t.path(), "c5.txt", "5 5\n0 1\n1 2\n2 3\n3 4\n0 4\n");
    let o = run_in(t.path(), &["decompose", "c5.txt", "--edge", "0", "1", "--mode", "cycle", "--k", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("0 A_1\n1 A_2\n"));
    let o = run_in(t.path(), &["decompose", "c5.txt", "--edge", "0", "2"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn tester_and_pipeline() {
    let t = tempfile::tempdir().unwrap();
    write(t.path(), "c3.txt", TRIANGLE);
    write(t.path(), "k2.txt", "2 1\n0 1\n");
    write(t.path(), "c4.txt", SQUARE);
    let o = run_in(t.path(), &["--json", "test-hom", "c4.txt", "k2.txt", "--q", "4", "--trials", "50"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["tester"]["rejects"], 0);
    let o = run_in(t.path(), &["--threads", "1", "test-hom", "c3.txt", "k2.txt", "--q", "9", "--trials", "50", "--certify"]);
    assert!(stdout(&o).contains("far_lower_bound 1"));
    write(t.path(), "k4.txt", K4);
    let o = run_in(t.path(), &["pipeline", "c3.txt", "k4.txt", "--alpha", "0.2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("case Triangle"));
}

#[test]
fn run_orchestrates_and_reports_failures() {
    let t = tempfile::tempdir().unwrap();
    write(t.path(), "c3.txt", TRIANGLE);
    write(t.path(), "c4.txt", SQUARE);
    write(
        t.path(),
        "cfg.json",
        r#"{"seed": 4, "out": "res", "experiments": [
            {"id": "ok", "args": ["hom", "c4.txt", "c3.txt"]},
            {"id": "fails", "args": ["hom", "c3.txt", "c4.txt"]}
        ]}"#,
    );
    let o = run_in(t.path(), &["run", "cfg.json"]);
    assert_eq!(code(&o), 1);
    let summary = fs::read_to_string(t.path().join("res/report.csv")).unwrap();
    assert!(summary.contains("ok,hom,0,"));
    assert!(summary.contains("fails,hom,1,"));
    let inner: Value = serde_json::from_str(&fs::read_to_string(t.path().join("res/ok/report.json")).unwrap()).unwrap();
    assert_eq!(inner["params"]["seed"], 4);
}
