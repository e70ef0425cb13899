use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vanrees")).args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_vanrees"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all);
    let v: Value = serde_json::from_slice(&out.stdout).expect("report is json");
    (out.status.code().unwrap(), v)
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn table5_report() {
    let (code, v) = json(&["vanrees", "corpus:table5"]);
    assert_eq!(code, 0);
    for i in 1..=7 {
        assert_eq!(v["results"][format!("cond{i}")], true);
    }
    assert_eq!(v["results"]["count3"], 1053);
    assert_eq!(v["schema"], "vanrees-report/1");
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn table3_subsquare_count() {
    let out = run(&["subsquares", "corpus:table3", "--order", "3", "--count"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "24");
}

#[test]
fn empty_stdin_is_a_usage_error() {
    let out = run_stdin(&["validate", "-"], "");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_verdicts() {
    let ok = run_stdin(&["validate", "-"], "0 1 2\n1 2 0\n2 0 1\n");
    assert_eq!(ok.status.code(), Some(0));
    let repeat = run_stdin(&["validate", "-"], "0 1 2\n1 2 0\n1 0 2\n");
    assert_eq!(repeat.status.code(), Some(1));
    let ragged = run_stdin(&["validate", "-"], "0 1 2\n1 2\n2 0 1\n");
    assert_eq!(ragged.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&ragged.stderr).contains("line 2"));
    let ragged_vanrees = run_stdin(&["vanrees", "-"], "0 1 2\n1 2 0\n1 0 2\n");
    assert_eq!(ragged_vanrees.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_and_entry() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["vanrees", "corpus:table9"]).status.code(), Some(2));
    assert_eq!(run(&["vanrees", "/nonexistent/table.txt"]).status.code(), Some(2));
}

#[test]
fn json_round_trips_and_exit_codes_match_verdicts() {
    let list = json(&["corpus", "list"]).1;
    let names: Vec<String> = list["results"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(names.len(), 11);
    for name in names {
        let (code, v) = json(&["vanrees", &format!("corpus:{name}")]);
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(serde_json::from_str::<Value>(&text).unwrap(), v);
        let van_rees = v["results"]["van_rees"].as_bool().unwrap();
        assert_eq!(code, if van_rees { 0 } else { 1 }, "{name}");
        assert_eq!(v["holds"], van_rees);
    }
}

#[test]
fn dump_reproduces_the_file() {
    let out = run(&["corpus", "dump", "table1"]);
    assert_eq!(stdout(&out), include_str!("../../core/src/corpus/data/table1.txt"));
    let z3 = run(&["corpus", "dump", "z3"]);
    assert_eq!(stdout(&z3), "0 1 2\n1 2 0\n2 0 1\n");
}

#[test]
fn structure_commands() {
    assert_eq!(run(&["identity", "corpus:table5", "--name", "commutative"]).status.code(), Some(0));
    assert_eq!(run(&["identity", "corpus:table4", "--name", "associative"]).status.code(), Some(1));
    assert_eq!(run(&["identity", "corpus:table4", "--name", "no-such"]).status.code(), Some(2));
    let (code, v) = json(&["subloops", "corpus:z3sq"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["count"], 6);
    assert_eq!(run(&["normal", "corpus:heisenberg27", "--subloop", "9"]).status.code(), Some(1));
    assert_eq!(run(&["normal", "corpus:heisenberg27", "--subloop", "1"]).status.code(), Some(0));
    let (code, v) = json(&["quotient", "corpus:z3cube", "--subloop", "1,3"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["table"].as_array().unwrap().len(), 3);
    let (_, v) = json(&["nuclei", "corpus:table5"]);
    assert_eq!(v["results"]["center"].as_array().unwrap().len(), 3);
    assert_eq!(run(&["steiner", "corpus:table6"]).status.code(), Some(0));
    assert_eq!(run(&["bruck", "corpus:heisenberg27"]).status.code(), Some(0));
    assert_eq!(run(&["bruck", "corpus:table1"]).status.code(), Some(1));
}

#[test]
fn transforms() {
    let iso = run(&["isotope", "corpus:table2", "--a", "a", "--b", "b"]);
    assert_eq!(iso.status.code(), Some(0));
    assert_eq!(stdout(&iso).lines().count(), 9);
    let conj = run(&["conjugate", "corpus:z3", "--which", "scr"]);
    assert_eq!(stdout(&conj), "0 2 1\n1 0 2\n2 1 0\n");
    assert_eq!(run(&["conjugate", "corpus:z3", "--which", "xyz"]).status.code(), Some(2));
}

#[test]
fn equivalence_exit_codes() {
    let (code, v) = json(&["equiv", "corpus:table2", "corpus:table2", "--level", "isotopy"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["witness"]["triple"]["row_perm"].as_array().unwrap().len(), 9);
    assert!(v["results"]["witness"]["conjugate"].is_string());
    assert_eq!(run(&["equiv", "corpus:table2", "corpus:z3sq"]).status.code(), Some(1));
    assert_eq!(run(&["equiv", "corpus:z3", "corpus:z3", "--level", "sideways"]).status.code(), Some(2));
}

#[test]
fn search_commands() {
    let (code, v) = json(&["search", "--order", "9", "--mode", "vanRees", "--iso"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["count"], 1);
    assert_eq!(v["results"]["certificate"], "exhausted");
    let (code, v) = json(&["search", "--order", "15", "--mode", "vanRees", "--iso", "--budget-nodes", "100"]);
    assert_eq!(code, 1);
    assert_eq!(v["results"]["certificate"], "budget-exceeded");
    let (_, v) = json(&["search", "--order", "11", "--mode", "vanRees"]);
    assert_eq!(v["results"]["reason"], "3mod6");
    assert_eq!(run(&["search", "--order", "21", "--mode", "vanRees"]).status.code(), Some(2));
    let (code, v) = json(&["classify", "--order", "9", "--mode", "exp3RegularTranslations"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["count"], 2);
    let (code, v) = json(&["probe-problem1", "--order", "9"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["completed"], true);
}

#[test]
fn thread_count_from_flag_and_environment() {
    let out = run(&["--threads", "1", "search", "--order", "9", "--mode", "vanRees", "--iso"]);
    assert_eq!(out.status.code(), Some(0));
    let env = Command::new(env!("CARGO_BIN_EXE_vanrees"))
        .args(["search", "--order", "9", "--mode", "vanRees"])
        .env("VANREES_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(0));
}
