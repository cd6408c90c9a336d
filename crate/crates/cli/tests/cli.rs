use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/corpus").join(name)
}

fn memmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_memmod")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn run(file: &str, extra: &[&str]) -> Output {
    let path = corpus(file);
    let mut args = vec!["run", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    memmod(&args)
}

#[test]
fn passing_file_exits_zero() {
    let o = run("mp_relaxed.lit", &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("allowed (f == 1 && r == 0): holds"));
}

#[test]
fn sc_model_violates_relaxed_witness() {
    let o = run("mp_relaxed.lit", &["--model", "sc"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sfp_breaks_rfub() {
    let o = run("rfub.lit", &["--sfp"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("x := 42"), "{}", stdout(&o));
    assert_eq!(run("rfub_sfp.lit", &[]).status.code(), Some(0));
}

#[test]
fn witness_flag_prints_trace() {
    let o = run("mp_relaxed.lit", &["--witness"]);
    let out = stdout(&o);
    assert!(out.contains("flag := 1"), "{out}");
    assert!(out.contains("r := x"), "{out}");
}

#[test]
fn json_output_is_deterministic() {
    let a = run("lock.lit", &["--json"]);
    let b = run("lock.lit", &["--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["outcome"], "pass");
    assert_eq!(v["expectations"].as_array().unwrap().len(), 2);
}

#[test]
fn syntax_error_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.lit");
    std::fs::write(&p, "litmus \"bad\"\nshared x = 0\nthread t0 {\n    x = ;\n}\n").unwrap();
    let o = memmod(&["run", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.lit:4:"));
}

#[test]
fn missing_file_and_bad_flags_exit_three() {
    assert_eq!(memmod(&["run", "/nonexistent.lit"]).status.code(), Some(3));
    assert_eq!(run("oota.lit", &["--model", "tso"]).status.code(), Some(3));
}

#[test]
fn tight_limits_are_inconclusive() {
    let o = run("lock.lit", &["--max-configs", "5"]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
}

#[test]
fn corpus_passes() {
    let dir = corpus("");
    let o = memmod(&["corpus", dir.to_str().unwrap()]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(out.contains("15/15"), "{out}");
}

#[test]
fn laws_pass() {
    let o = memmod(&["laws"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn traces_lists_interleavings() {
    let o = run_traces("mp_rel_acq.lit");
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).is_empty());
}

fn run_traces(file: &str) -> Output {
    let p = corpus(file);
    memmod(&["traces", p.to_str().unwrap()])
}
