//! End-to-end checks of the command-line surface: formats, agreement
//! checks, exit codes, and seeded determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_frechet"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn frechet")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

struct TempDir(PathBuf);

impl TempDir {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("frechet-cli-test-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        TempDir(dir)
    }

    fn file(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn write_worked_instance(dir: &TempDir) -> (PathBuf, PathBuf) {
    let a = dir.file("a.csv");
    let b = dir.file("b.csv");
    std::fs::write(&a, "0,0\n2,0\n").unwrap();
    std::fs::write(&b, "0,1\n2,1\n").unwrap();
    (a, b)
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn decide_agreement_and_exit_codes() {
    let dir = TempDir::new("decide");
    let (a, b) = write_worked_instance(&dir);

    let out = run(&["decide", "--a", p(&a), "--b", p(&b), "--delta", "2.2360679775", "--algo", "both"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("decision: true"), "{text}");
    assert!(text.contains("agreement: yes"), "{text}");

    let out = run(&["decide", "--a", p(&a), "--b", p(&b), "--delta", "1", "--algo", "both"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("decision: false"));

    // diagonal moves make delta = 1 enough
    let out = run(&[
        "decide", "--a", p(&a), "--b", p(&b), "--delta", "1", "--algo", "both", "--model",
        "diagonal",
    ]);
    assert!(stdout(&out).contains("decision: true"));

    // malformed CSV is an input error
    let bad = dir.file("bad.csv");
    std::fs::write(&bad, "1.0\n").unwrap();
    let out = run(&["decide", "--a", p(&bad), "--b", p(&b), "--delta", "1"]);
    assert_eq!(out.status.code(), Some(1));

    // missing required flag is an input error
    let out = run(&["decide", "--a", p(&a), "--delta", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn compute_matches_spec_values() {
    let dir = TempDir::new("compute");
    let (a, b) = write_worked_instance(&dir);

    let out = run(&["compute", "--a", p(&a), "--b", p(&b), "--algo", "both"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("frechet_distance: 2.23606797749979"), "{text}");
    assert!(text.contains("agreement: yes"), "{text}");
    assert!(text.contains("decide_calls:"), "{text}");

    let out = run(&["compute", "--a", p(&a), "--b", p(&b), "--algo", "both", "--model", "diagonal"]);
    assert!(stdout(&out).contains("frechet_distance: 1.0"));

    // single-point inputs
    let a1 = dir.file("a1.csv");
    let b1 = dir.file("b1.csv");
    std::fs::write(&a1, "0,0\n").unwrap();
    std::fs::write(&b1, "3,4\n").unwrap();
    let out = run(&["compute", "--a", p(&a1), "--b", p(&b1)]);
    assert!(stdout(&out).contains("frechet_distance: 5.0"));
}

#[test]
fn naive_only_runs() {
    let dir = TempDir::new("naive");
    let (a, b) = write_worked_instance(&dir);
    let out = run(&["decide", "--a", p(&a), "--b", p(&b), "--delta", "3", "--algo", "naive"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("decision: true"), "{text}");
    assert!(text.contains("naive_ms:") && !text.contains("fast_ms:"), "{text}");

    let out = run(&["compute", "--a", p(&a), "--b", p(&b), "--algo", "naive"]);
    assert!(stdout(&out).contains("frechet_distance: 2.23606797749979"));
}

#[test]
fn compute_json_output_parses() {
    let dir = TempDir::new("json");
    let (a, b) = write_worked_instance(&dir);
    let out = run(&["compute", "--a", p(&a), "--b", p(&b), "--algo", "both", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["frechet_distance"].as_f64(), Some(5f64.sqrt()));
    assert_eq!(v["agreement"].as_bool(), Some(true));
}

#[test]
fn generators_are_seed_deterministic_and_round_trip() {
    let dir = TempDir::new("gen");
    for format in ["csv", "json"] {
        let a1 = dir.file(&format!("a1.{format}"));
        let b1 = dir.file(&format!("b1.{format}"));
        let a2 = dir.file(&format!("a2.{format}"));
        let b2 = dir.file(&format!("b2.{format}"));
        for (oa, ob) in [(&a1, &b1), (&a2, &b2)] {
            let out = run(&[
                "gen-random", "--out-a", p(oa), "--out-b", p(ob), "--m", "64", "--n", "80",
                "--seed", "42", "--kind", "walk", "--format", format,
            ]);
            assert!(out.status.success());
        }
        // byte-identical per seed
        assert_eq!(std::fs::read(&a1).unwrap(), std::fs::read(&a2).unwrap());
        assert_eq!(std::fs::read(&b1).unwrap(), std::fs::read(&b2).unwrap());

        // and the files parse back: decide runs on them
        let out = run(&["decide", "--a", p(&a1), "--b", p(&b1), "--delta", "3", "--algo", "both"]);
        assert!(out.status.success(), "{}", stdout(&out));
        assert!(stdout(&out).contains("agreement: yes"));
    }

    // uniform family too
    let ua = dir.file("ua.csv");
    let ub = dir.file("ub.csv");
    let out = run(&[
        "gen-random", "--out-a", p(&ua), "--out-b", p(&ub), "--m", "30", "--n", "30", "--seed",
        "7", "--kind", "uniform",
    ]);
    assert!(out.status.success());
    let out = run(&["compute", "--a", p(&ua), "--b", p(&ub), "--algo", "both"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("agreement: yes"));
}

#[test]
fn lowerbound_commands() {
    let dir = TempDir::new("lb");
    let inst = dir.file("lb.json");
    let out = run(&["gen-lowerbound", "--m", "4", "--out", p(&inst)]);
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&inst).unwrap()).unwrap();
    assert_eq!(v["m"].as_u64(), Some(4));
    assert_eq!(v["a"].as_array().unwrap().len(), 8);
    assert_eq!(v["b_main"].as_array().unwrap().len(), 4);

    let out = run(&["verify-lowerbound", "--m", "6", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["distinct_states"].as_u64(), Some(64));
    assert_eq!(v["ok"].as_bool(), Some(true));
}

#[test]
fn bench_emits_schema_and_cross_checks() {
    let out = run(&[
        "bench", "--sizes", "128,256", "--seed", "3", "--algo", "both", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert!(row["naive_ms"].as_f64().unwrap() >= 0.0);
        assert!(row["fast_ms"].as_f64().unwrap() >= 0.0);
        assert_eq!(row["agree"].as_bool(), Some(true));
        assert!(row["params"]["block_size"].as_u64().is_some());
    }

    let out = run(&["bench", "--family", "lowerbound", "--sizes", "2,3,10", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let states: Vec<u64> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["states"].as_u64().unwrap())
        .collect();
    assert_eq!(states, vec![4, 8, 1024]);
}

#[test]
fn env_vars_mirror_flags() {
    let dir = TempDir::new("env");
    let (a, b) = write_worked_instance(&dir);
    let out = bin()
        .args(["decide", "--a", p(&a), "--b", p(&b)])
        .env("FRECHET_DELTA", "2.5")
        .env("FRECHET_ALGO", "both")
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    assert!(text.contains("decision: true"), "{text}");
    assert!(text.contains("agreement: yes"), "{text}");

    // explicit flags win over the environment
    let out = bin()
        .args(["decide", "--a", p(&a), "--b", p(&b), "--delta", "1"])
        .env("FRECHET_DELTA", "2.5")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("decision: false"));
}
