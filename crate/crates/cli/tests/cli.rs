use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn pebble(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pebble"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("running pebble")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key}= in\n{text}"))
}

fn zero_word() -> String {
    "0".repeat(128)
}

#[test]
fn gen_writes_cylinder() {
    let dir = tempfile::tempdir().unwrap();
    let o = pebble(dir.path(), &["gen", "--family", "cylinder", "--h", "3", "--out", "c3.pg"]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "nodes"), "18");
    let text = fs::read_to_string(dir.path().join("c3.pg")).unwrap();
    assert!(text.starts_with("PGRAPH1 18 "));
}

#[test]
fn out_dir_resolves_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let o = pebble(dir.path(), &["--out-dir", "outs", "gen", "--family", "pyramid", "--h", "3", "--out", "p.pg"]);
    assert!(o.status.success());
    assert!(dir.path().join("outs/p.pg").exists());
}

#[test]
fn solve_reports_magic_space() {
    let dir = tempfile::tempdir().unwrap();
    assert!(pebble(dir.path(), &["gen", "--family", "cylinder", "--h", "2", "--out", "c2.pg"]).status.success());
    let o = pebble(dir.path(), &["solve", "--graph", "c2.pg", "--game", "magic", "--mbound", "2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(field(&out, "magic_space"), "2");
    assert!(out.contains("PSTRAT1 magic 2"));
}

#[test]
fn solved_witness_validates() {
    let dir = tempfile::tempdir().unwrap();
    assert!(pebble(dir.path(), &["gen", "--family", "pyramid", "--h", "3", "--out", "p.pg"]).status.success());
    let o = pebble(dir.path(), &["solve", "--graph", "p.pg", "--mode", "seq", "--witness", "w.ps"]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "space"), "3");
    let o = pebble(
        dir.path(),
        &["pebble", "--graph", "p.pg", "--strategy", "w.ps", "--mode", "seq", "--alphas", "1,2", "--csv", "m.csv"],
    );
    assert!(o.status.success());
    let csv = fs::read_to_string(dir.path().join("m.csv")).unwrap();
    assert!(csv.starts_with("metric,key,value\n"));
    assert!(csv.contains("\nspace,,3\n"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert!(pebble(dir.path(), &["gen", "--family", "pyramid", "--h", "4", "--out", "p.pg"]).status.success());

    assert_eq!(pebble(dir.path(), &["no-such-command"]).status.code(), Some(1));
    assert_eq!(pebble(dir.path(), &["--help"]).status.code(), Some(0));
    assert_eq!(pebble(dir.path(), &["solve", "--graph", "missing.pg"]).status.code(), Some(1));

    fs::write(dir.path().join("bad.ps"), "PSTRAT1 standard\n+b 9\n").unwrap();
    let o = pebble(dir.path(), &["pebble", "--graph", "p.pg", "--strategy", "bad.ps"]);
    assert_eq!(o.status.code(), Some(2));

    let o = pebble(dir.path(), &["solve", "--graph", "p.pg", "--max-states", "3"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn help_lists_formats() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&pebble(dir.path(), &["--help"]));
    for name in ["PGRAPH1", "PSTRAT1", "SHFR1", "PTRACE1"] {
        assert!(out.contains(name), "{name} missing from help");
    }
}

#[test]
fn shf_eval_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let o = pebble(dir.path(), &["shf-setup", "--family", "cylinder", "--h", "2", "--out", "t.shfr"]);
    assert!(o.status.success());
    let x = "ab".repeat(64);
    let a = pebble(dir.path(), &["shf-eval", "--table", "t.shfr", "--x", &x]);
    let b = pebble(dir.path(), &["shf-eval", "--table", "t.shfr", "--x", &x]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(field(&stdout(&a), "output").len(), 128);
}

#[test]
fn streaming_setup_matches_graph_setup() {
    let dir = tempfile::tempdir().unwrap();
    let graph = pebble(dir.path(), &["shf-setup", "--family", "cylinder", "--h", "3", "--out", "g.shfr"]);
    let stream = pebble(dir.path(), &["shf-setup", "--family", "cylinder", "--h", "3", "--streaming", "--out", "s.shfr"]);
    assert!(graph.status.success() && stream.status.success());
    assert_eq!(fs::read(dir.path().join("g.shfr")).unwrap(), fs::read(dir.path().join("s.shfr")).unwrap());
}

#[test]
fn honest_setup_trace_audits_clean() {
    let dir = tempfile::tempdir().unwrap();
    let z = zero_word();
    assert!(pebble(dir.path(), &["gen", "--family", "cylinder", "--h", "3", "--out", "c3.pg"]).status.success());
    let o = pebble(
        dir.path(),
        &["--oracle", "test", "shf-setup", "--family", "cylinder", "--h", "3", "--out", "t.shfr", "--trace", "t.tr"],
    );
    assert!(o.status.success());
    let o = pebble(
        dir.path(),
        &["--oracle", "test", "audit", "--graph", "c3.pg", "--trace", "t.tr", "--zeta", &z, "--csv", "a.csv"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert_eq!(field(&out, "legal"), "true");
    assert_eq!(field(&out, "goal_met"), "true");
    assert_eq!(field(&out, "magic_used"), "0");
    let csv = fs::read_to_string(dir.path().join("a.csv")).unwrap();
    assert!(csv.starts_with("step,pebbles,black,magic\n"));
}

fn bench_rows(dir: &Path, extra: &[&str]) -> Vec<Vec<String>> {
    let mut args = vec!["bench", "--h", "2,4,8", "--evals", "20", "--no-timing", "--csv", "b.csv"];
    args.extend_from_slice(extra);
    assert!(pebble(dir, &args).status.success());
    let text = fs::read_to_string(dir.join("b.csv")).unwrap();
    text.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn bench_hash_calls_grow_quadratically() {
    let dir = tempfile::tempdir().unwrap();
    let rows = bench_rows(dir.path(), &[]);
    let col = rows[0].iter().position(|c| c == "hash_calls").unwrap();
    let formula = rows[0].iter().position(|c| c == "formula_hash_calls").unwrap();
    let calls: Vec<u64> = rows[1..].iter().map(|r| r[col].parse().unwrap()).collect();
    assert_eq!(calls, vec![4, 16, 64]);
    for r in &rows[1..] {
        assert_eq!(r[col], r[formula]);
    }
}

#[test]
fn bench_without_timing_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let first = bench_rows(dir.path(), &[]);
    let a = fs::read(dir.path().join("b.csv")).unwrap();
    let second = bench_rows(dir.path(), &[]);
    assert_eq!(first[0][0], "h");
    assert_eq!(first, second);
    assert_eq!(a, fs::read(dir.path().join("b.csv")).unwrap());
}

#[test]
fn json_report_format() {
    let dir = tempfile::tempdir().unwrap();
    let o = pebble(dir.path(), &["--format", "json", "bench", "--h", "2", "--evals", "1", "--no-timing"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["hash_calls"], 4);
}

#[test]
fn crossover_measure() {
    let dir = tempfile::tempdir().unwrap();
    let o = pebble(
        dir.path(),
        &["measure", "--family", "cc-alpha-crossover", "--h", "16", "--strategy", "p1", "--crossover"],
    );
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(field(&out, "pcc_1_p2"), "30");
    assert_eq!(field(&out, "pcc_1_p1"), "68");
}
