use std::path::Path;
use std::process::{Command, Output};

fn modcomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modcomp")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const REV_REL: &str = "(VAR x y z)(RULES rev(x) -> rev'(x,nil) rev'(nil,y) ->= y rev'(cons(x,y),z) ->= rev'(y,cons(x,z)))";

#[test]
fn verdict_only_by_default() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "rev.trs", REV_REL);
    let o = modcomp(&[&f]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "YES(?,O(n))\n");
}

#[test]
fn parse_errors_exit_one_with_a_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.trs", "(VAR x)\n(RULES\n  f(x) -> \n)");
    let o = modcomp(&[&f]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    assert!(err.contains("4:1"), "{err}");
    assert!(stdout(&o).is_empty());
}

#[test]
fn bad_options_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "rev.trs", REV_REL);
    assert_eq!(modcomp(&[&f, "--dims", "0"]).status.code(), Some(1));
    assert_eq!(modcomp(&[&f, "--timeout", "-1"]).status.code(), Some(1));
    assert_eq!(modcomp(&[&f, "--proof", "xml"]).status.code(), Some(1));
    assert_eq!(modcomp(&["/nonexistent/file.trs"]).status.code(), Some(1));
}

#[test]
fn json_proof_follows_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "rev.trs", REV_REL);
    let o = modcomp(&[&f, "--proof", "json", "--deterministic"]);
    let out = stdout(&o);
    let (verdict, json) = out.split_once('\n').unwrap();
    assert_eq!(verdict, "YES(?,O(n))");
    let (bound, proof) = modcomp::render::parse_json_str(json).unwrap();
    assert_eq!(bound.verdict(), verdict);
    proof.recheck().unwrap();
}

#[test]
fn text_proof_starts_with_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "rev.trs", REV_REL);
    let out = stdout(&modcomp(&[&f, "--proof", "text"]));
    assert!(out.starts_with("YES(?,O(n))\n"));
    assert!(out.contains("match-bound 1"), "{out}");
}

#[test]
fn runtime_complexity_of_a_constant_rule() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "c.trs", "(RULES a -> b)");
    assert_eq!(stdout(&modcomp(&[&f, "--complexity", "runtime"])), "YES(?,O(n))\n");
}

#[test]
fn directory_mode_lists_sorted_results_and_reports_errors() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "b_rev.trs", REV_REL);
    write(dir.path(), "a_weak.trs", "(VAR x)(RULES f(x) ->= x)");
    write(dir.path(), "c_bad.trs", "(RULES a ->");
    write(dir.path(), "notes.txt", "ignored");
    let o = modcomp(&[dir.path().to_str().unwrap()]);
    assert_eq!(stdout(&o), "a_weak.trs: YES(?,O(1))\nb_rev.trs: YES(?,O(n))\nc_bad.trs: ERROR\n");
    assert_eq!(o.status.code(), Some(1));
}
