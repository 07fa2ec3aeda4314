//! Acceptance run: one PASS/FAIL line per criterion, all thresholds pinned
//! below.  Runs without the test harness so the table is always printed;
//! exits nonzero when any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use hanoi::analysis::{is_empty, Verdict};
use hanoi::fixtures;
use hanoi::games::{build_pg, GameArena, PgMode, Player, VertexLabel};
use hanoi::hoa_io::parse_automaton;
use hanoi::Bounds;
use hanoi_check::oracle;
use hanoi_check::suites::{run_suite, SuiteReport};

const SEED: u64 = 1;
const ARBITER: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/arbiter.hoa");

const CRIT1_MAX: Duration = Duration::from_secs(1);
const CRIT3_COUNT: usize = 1000;
const CRIT3_MAX: Duration = Duration::from_secs(60);
const CRIT4_COUNT: usize = 200;
const CRIT5_COUNT: usize = 200;
/// Six transformations, 100 instances each.
const CRIT6_COUNT: usize = 6 * 100;
/// Nine generated families, 300 instances each.
const CRIT7_COUNT: usize = 9 * 300;
const CRIT8_COUNT: usize = 100;
const CRIT10_INT_COUNT: usize = 100;
/// 50 reflexive (even index) and 50 random pairs (odd index).
const CRIT11_COUNT: usize = 100;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn suite(name: &str, count: usize) -> SuiteReport {
    run_suite(name, count, SEED).unwrap_or_else(|| panic!("unknown suite {name}"))
}

fn suite_outcome(r: &SuiteReport) -> Outcome {
    let line = format!("{} {} in {:.2?}", r.name, r.summary(), r.elapsed);
    if r.ok() {
        Ok(line)
    } else {
        Err(format!("{line}; first failures: {:?}", &r.failures[..r.failures.len().min(3)]))
    }
}

fn criterion1() -> Outcome {
    let start = Instant::now();
    let text = std::fs::read_to_string(ARBITER).map_err(|e| e.to_string())?;
    let a = parse_automaton(&text).map_err(|e| e.to_string())?;
    let Verdict::Nonempty(lasso) = is_empty(&a) else {
        return Err("arbiter reported EMPTY".into());
    };
    oracle::check_lasso(&a, &lasso)?;

    let out = Command::new(env!("CARGO_BIN_EXE_hanoi"))
        .args(["solve-game", ARBITER, "--strategy"])
        .output()
        .map_err(|e| e.to_string())?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    if !stdout.lines().any(|l| l == "WINNER: controller") {
        return Err(format!("solve-game said: {stdout}"));
    }
    let rows = |state: &str| -> Vec<&str> {
        stdout.lines().map(str::trim).filter(|l| l.starts_with(&format!("{state} "))).collect()
    };
    let (q2, q3) = (rows("q2"), rows("q3"));
    if q2.is_empty() || !q2.iter().all(|l| l.ends_with("-> g=0")) {
        return Err(format!("strategy at q2: {q2:?}"));
    }
    if q3.is_empty() || !q3.iter().all(|l| l.ends_with("-> g=1")) {
        return Err(format!("strategy at q3: {q3:?}"));
    }
    let took = start.elapsed();
    if took >= CRIT1_MAX {
        return Err(format!("took {took:.2?}"));
    }
    Ok(format!("nonempty, controller wins, g=0 at q2, g=1 at q3, {took:.2?}"))
}

fn criterion2() -> Outcome {
    let g = fixtures::arbiter_game();
    let arena = GameArena::new(&g);
    let pg = build_pg(&g, &arena, PgMode::Exact, &Bounds::default()).map_err(|e| e.to_string())?;
    let mut offers = Vec::new();
    for v in 0..pg.num_vertices() {
        match &pg.label[v] {
            VertexLabel::Offer { state, set, .. } => {
                if pg.owner[v] != Player::Out || pg.color[v] != 0 {
                    return Err(format!("offer vertex {v} has owner {:?}, color {}", pg.owner[v], pg.color[v]));
                }
                offers.push((*state, set.clone()));
            }
            VertexLabel::State(_) if pg.owner[v] == Player::In => {}
            l => return Err(format!("unexpected vertex {v}: {l:?}")),
        }
    }
    let want = vec![
        (0, vec![0, 1]),
        (0, vec![1, 2]),
        (1, vec![0, 3]),
        (1, vec![2, 3]),
        (2, vec![1, 2]),
        (3, vec![3]),
    ];
    if offers == want {
        Ok(format!("{} (q,S) vertices, all color 0", offers.len()))
    } else {
        Err(format!("offers {offers:?}"))
    }
}

fn criterion3() -> Outcome {
    let r = suite("emptiness", CRIT3_COUNT);
    let line = suite_outcome(&r)?;
    if r.elapsed >= CRIT3_MAX {
        return Err(format!("{line}, over {CRIT3_MAX:?}"));
    }
    Ok(line)
}

fn criterion9() -> Outcome {
    let r = suite("certify", CRIT7_COUNT);
    suite_outcome(&r).map(|l| format!("{l} ({} certified, {} not applicable)", r.total - r.skipped, r.skipped))
}

fn criterion10() -> Outcome {
    let b = suite_outcome(&suite("boolean", CRIT7_COUNT));
    let i = suite_outcome(&suite("symbolic", CRIT10_INT_COUNT));
    match (b, i) {
        (Ok(b), Ok(i)) => Ok(format!("{b}; {i}")),
        (b, i) => Err(format!("{}; {}", b.unwrap_or_else(|e| e), i.unwrap_or_else(|e| e))),
    }
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("arbiter regression", criterion1),
        ("P_G fidelity", criterion2),
        ("emptiness oracle agreement", criterion3),
        ("SAT reduction", || suite_outcome(&suite("sat", CRIT4_COUNT))),
        ("lasso bound", || suite_outcome(&suite("lasso-bound", CRIT5_COUNT))),
        ("transformation soundness", || suite_outcome(&suite("transforms", CRIT6_COUNT))),
        ("game oracle agreement", || suite_outcome(&suite("games", CRIT7_COUNT))),
        ("QSAT2 fidelity", || suite_outcome(&suite("qbf", CRIT8_COUNT))),
        ("certification", criterion9),
        ("symbolic conservativity", criterion10),
        ("inclusion sanity", || suite_outcome(&suite("inclusion", CRIT11_COUNT))),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.into_iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                println!("FAIL {:>2} {name}: {detail}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
