use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use hanoi::hoa_io::parse_automaton;

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn hanoi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hanoi")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn emptiness_exit_codes() {
    let o = hanoi(&["check-empty", &data("arbiter.hoa")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("NONEMPTY"));

    let o = hanoi(&["check-empty", &data("empty.hoa")]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "EMPTY");

    let o = hanoi(&["check-empty", &data("malformed.hoa")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Acceptance"));
}

#[test]
fn acceptance_override() {
    // Fin of the color seen on every q3/q4 edge: the run must stay in q1/q2
    let o = hanoi(&["check-empty", &data("arbiter.hoa"), "--acc-override", "Fin(1)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = hanoi(&["check-empty", &data("arbiter.hoa"), "--acc-override", "Inf(0) & Inf(1)"]);
    assert_eq!(o.status.code(), Some(0));
    let o = hanoi(&["check-empty", &data("arbiter.hoa"), "--acc-override", "f"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn state_based_output_reparses() {
    let o = hanoi(&["transform", &data("arbiter.hoa"), "--to", "state-based"]);
    assert_eq!(o.status.code(), Some(0));
    let a = parse_automaton(&stdout(&o)).expect("printed automaton parses");
    assert!(a.hoa.is_state_based());
    let p = scratch("arbiter-sb.hoa", &stdout(&o));
    let o = hanoi(&["check-empty", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn inclusion_is_reflexive() {
    let a = data("arbiter.hoa");
    let o = hanoi(&["check-inclusion", &a, &a]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "INCLUDED");
}

#[test]
fn inclusion_counterexample() {
    let a = data("arbiter.hoa");
    let text = fs::read_to_string(&a).unwrap();
    // q3/q4 infinitely often instead of q1/q2: idling in q1 separates them
    let b = scratch("arbiter-inf1.hoa", &text.replace("Inf(0)", "Inf(1)"));
    let o = hanoi(&["check-inclusion", &a, b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.starts_with("NOT-INCLUDED"), "{out}");
    assert!(out.contains("word:"), "{out}");

    let all = scratch("arbiter-true.hoa", &text.replace("Inf(0)", "t"));
    let o = hanoi(&["check-inclusion", &a, all.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = hanoi(&["check-inclusion", all.to_str().unwrap(), &a]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn copy_game_from_qbf() {
    let o = hanoi(&["gen", "qbf2-hog", "--formula", "forall x exists y (x <-> y)"]);
    assert_eq!(o.status.code(), Some(0));
    let p = scratch("copy.hog", &stdout(&o));
    let o = hanoi(&["solve-game", p.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "WINNER: controller");

    let o = hanoi(&["gen", "qbf2-hog", "--safety", "--formula", "forall x exists y (x & y)"]);
    let p = scratch("and.hog", &stdout(&o));
    let o = hanoi(&["solve-game", p.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "WINNER: environment");
}

#[test]
fn engines_agree_on_the_arbiter() {
    for engine in ["pg-exact", "pg-full", "direct"] {
        let o = hanoi(&["solve-game", &data("arbiter.hoa"), "--engine", engine]);
        assert_eq!(stdout(&o).trim(), "WINNER: controller", "{engine}");
    }
}

#[test]
fn generation_is_deterministic() {
    for kind in ["hoa", "hog", "sat-hoa", "qbf2-hog", "int-game"] {
        let a = hanoi(&["gen", kind, "--seed", "17"]);
        let b = hanoi(&["gen", kind, "--seed", "17"]);
        assert_eq!(a.status.code(), Some(0), "{kind}");
        assert_eq!(stdout(&a), stdout(&b), "{kind}");
    }
    let a = hanoi(&["gen", "hoa", "--seed", "1"]);
    let b = hanoi(&["gen", "hoa", "--seed", "2"]);
    assert_ne!(stdout(&a), stdout(&b));
}

#[test]
fn cross_check_prints_agreement() {
    let o = hanoi(&["cross-check", "emptiness", "--count", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1000/1000 agree"), "{}", stdout(&o));
    let o = hanoi(&["cross-check", "no-such-suite"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_output() {
    let o = hanoi(&["--json", "check-empty", &data("arbiter.hoa")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "NONEMPTY");
    assert!(v["witness"].is_string());
    assert!(v["sizes"]["states"].as_u64() == Some(4));
    assert!(v["timings"]["total_ms"].is_number());

    let o = hanoi(&["--json", "check-empty", &data("malformed.hoa")]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "ERROR");
}

fn order_game(b: u32, stay: &str, leave: &str) -> String {
    format!(
        "domain: int 0..{b}\ninputs: x\noutputs: y\nStates: 2\nStart: 0\nAcceptance: 2 Fin(1)\n--BODY--\n\
         State: 0\n[{stay}] 0 {{0}}\n[{leave}] 1 {{1}}\nState: 1\n[t] 1 {{1}}\n--END--\n"
    )
}

#[test]
fn integer_games() {
    for b in 0..=8 {
        // In answers x = b, which no y exceeds
        let p = scratch(&format!("strict-{b}.txt"), &order_game(b, "x < y", "x >= y"));
        let o = hanoi(&["solve-game", p.to_str().unwrap(), "--strategy"]);
        let text = stdout(&o);
        assert!(text.starts_with("WINNER: environment"), "{b}: {text}");
        assert!(text.contains(&format!("0/0: x={b}")), "{b}: {text}");

        let p = scratch(&format!("weak-{b}.txt"), &order_game(b, "x <= y", "x > y"));
        let o = hanoi(&["solve-game", p.to_str().unwrap()]);
        assert_eq!(stdout(&o).trim(), "WINNER: controller", "{b}");
    }
}
