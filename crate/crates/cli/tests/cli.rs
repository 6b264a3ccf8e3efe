use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn workbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_workbench")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = workbench(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn fails(args: &[&str]) -> String {
    let out = workbench(args);
    assert!(!out.status.success(), "{args:?} should fail");
    String::from_utf8(out.stderr).unwrap()
}

const PING_PONG: &str = "states: q0 q1 halt\nstart: q0\nblank: _\ntape_alphabet: _ 1\ninput_alphabet: 1\nhalt: halt\n\
                         delta: q0 _ -> q1 _ R\ndelta: q1 _ -> q0 _ L\n";

#[test]
fn tm_run_and_detect() {
    let dir = tempfile::tempdir().unwrap();
    let pp = dir.path().join("pp.tm");
    std::fs::write(&pp, PING_PONG).unwrap();
    let pp = pp.to_str().unwrap();
    assert_eq!(ok(&["tm", "detect", pp]), "self-termination first=0 repeat=2 steps=2 ids=2\n");
    assert_eq!(ok(&["tm", "detect", pp, "--space-bound", "2"]), "loops first=0 repeat=2\n");
    assert_eq!(ok(&["tm", "run", pp, "--budget-steps", "5"]), "budget-exhausted steps=5\ntape [q1 _]\n");
    let monus = data("monus.tm");
    let run = ok(&["tm", "run", &monus, "--input", "111011"]);
    assert!(run.starts_with("halted"));
    assert_eq!(run.lines().nth(1).unwrap().matches('1').count(), 1);
    fails(&["tm", "run", &monus, "--input", "2"]);
    fails(&["tm", "run", "/nonexistent.tm"]);
}

#[test]
fn rec_commands() {
    assert_eq!(ok(&["rec", "eval", "mul", "6", "7"]).split_whitespace().take(2).collect::<Vec<_>>(), ["value", "42"]);
    let mu = ok(&["rec", "mu", "(mu sub)", "2"]);
    assert_eq!(mu, "value 2\nwitness y=0 kernel=2\nwitness y=1 kernel=1\nwitness y=2 kernel=0\n");
    let never = ok(&["rec", "mu", "(mu (comp (succ) (proj 2 2)))", "0", "--budget-steps", "50"]);
    assert!(never.starts_with("budget-exhausted"));
    fails(&["rec", "eval", "mul", "6"]);
    fails(&["rec", "eval", "(proj 3 2)"]);
    fails(&["rec", "mu", "sub", "1", "2"]);
}

#[test]
fn godel_round_trip() {
    assert_eq!(ok(&["godel", "encode", "(= 0 0)"]), "7680\n");
    assert_eq!(ok(&["godel", "decode", "7680"]), "(= 0 0)\n");
    assert_eq!(ok(&["godel", "decode", "1", "--proof"]), "");
    fails(&["godel", "decode", "7"]);
    fails(&["godel", "decode", "0"]);
    fails(&["godel", "encode", "(= 0)"]);
}

#[test]
fn proof_search_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let found = ok(&["proof", "search", "(not (= 0 (s (var 2))))"]);
    assert!(found.starts_with("found"));
    let x = found.lines().nth(1).unwrap().strip_prefix("x ").unwrap().to_string();
    let proof: String = found.lines().skip(2).map(|l| format!("{l}\n")).collect();
    let file = dir.path().join("p.proof");
    std::fs::write(&file, proof).unwrap();
    let file = file.to_str().unwrap();
    let checked = ok(&["proof", "check", file]);
    assert_eq!(checked.lines().next().unwrap(), "valid: (not (= 0 (s (var 2))))");
    assert_eq!(ok(&["godel", "encode", "--proof", file]).trim(), x);

    std::fs::write(dir.path().join("bad.proof"), "(= 0 0) (axiom A1)\n").unwrap();
    let bad = ok(&["proof", "check", dir.path().join("bad.proof").to_str().unwrap()]);
    assert!(bad.starts_with("invalid"), "{bad}");
    assert!(ok(&["proof", "search", "(= 0 (s 0))", "--budget-candidates", "200"]).starts_with("not-found"));
    fails(&["proof", "search", "(= 0 0)", "--start", "5"]);
}

#[test]
fn race_writes_a_trace() {
    let dir = tempfile::tempdir().unwrap();
    let pp = dir.path().join("pp.tm");
    std::fs::write(&pp, PING_PONG).unwrap();
    let tm = format!("(tm pp {})", pp.display());
    let out = dir.path().join("trace.txt");
    ok(&["race", "(rec mul mul 30 30)", &tm, "--slice", "1", "--out", out.to_str().unwrap()]);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(
        text,
        "processes mul pp\n1 mul 1 running\n2 pp 1 running\n3 mul 2 running\n4 pp 2 finished\n\
         outcome winner pp loop first=0 repeat=2 steps=2 tick=4\n"
    );
    let trace = workbench_core::dovetail::Trace::parse(&text).unwrap();
    assert_eq!(workbench_core::dovetail::fairness_audit(&trace), Ok(1));
    fails(&["race", "(walk x)"]);
    fails(&["race", "(rec r mul 1)", "--slice", "0"]);
}

#[test]
fn theorem1_and_suite() {
    let table = ok(&["theorem1", "-g", "sub", "-a", "3", "--h", "(= 0 (s (var 2)))"]);
    assert!(table.lines().nth(2).unwrap().contains("ZeroFound"));
    let records = ok(&["theorem1", "-g", "sub", "-a", "3", "--h", "(= 0 (s (var 2)))", "--format", "records"]);
    assert_eq!(records.lines().count(), 1);
    assert!(records.contains("\"y\":3"));
    assert_eq!(records, ok(&["theorem1", "-g", "sub", "-a", "3", "--h", "(= 0 (s (var 2)))", "--format", "records"]));

    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.trace");
    let rigged = data("rigged.tm");
    let out = ok(&[
        "theorem1", "--backend", "tm", "--machine", &rigged, "-a", "1", "--h", "(= 0 0)", "--trace",
        trace.to_str().unwrap(),
    ]);
    assert!(out.contains("SelfTerminationDetected"));
    assert!(std::fs::read_to_string(trace).unwrap().starts_with("processes T1 T2\n"));

    let golden = std::fs::read_to_string(data("../tests/golden/suite.table")).unwrap();
    assert_eq!(ok(&["suite", "--check"]), golden);
    assert_eq!(ok(&["suite", "--file", &data("suite.toml")]), golden);

    fails(&["theorem1", "-g", "pred", "-a", "1", "--h", "(= 0 0)"]);
    fails(&["theorem1", "--backend", "tm", "-a", "1", "--h", "(= 0 0)"]);
    fails(&["theorem1", "-g", "sub", "-a", "1", "--h", "(= 0 0)", "--slice", "0"]);
    fails(&["suite", "--file", "/nonexistent.toml"]);
}
