//! `hanoi`: emptiness, inclusion, transformations and game solving on HOA
//! files, plus seeded instance generation and cross-checking.

use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hanoi::analysis::{included, is_empty, Inclusion, Verdict};
use hanoi::games::{
    hog_from_qbf2, parse_qbf2, solve_hog, Engine, GameSizes, Hog, InStrategy, OutMachine, Player, SolveOptions,
    WinningReport,
};
use hanoi::hoa_io::{parse_acceptance, parse_automaton, parse_hoa, print_hoa, print_hog, Parsed};
use hanoi::symbolic::{parse_int_game, print_int_game, solve_fgame};
use hanoi::transforms::{
    el_to_buchi, muller_to_streett, rabin_to_buchi, reach_to_buchi, safety_to_cobuchi, to_buchi, to_state_based,
    Transformed,
};
use hanoi::{fixtures, parse_label, Acceptance, Automaton, Bounds, ColorSet, PropId};
use hanoi_check::gen::{self, Family, HoaShape};
use hanoi_check::suites::{default_count, run_suite, SuiteReport, SUITES};

#[derive(Parser)]
#[command(name = "hanoi", version, about = "Omega-automata and games in the Hanoi format")]
struct Cli {
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide emptiness; exit 0 if nonempty, 1 if empty, 2 on error.
    CheckEmpty {
        file: String,
        /// Replace the acceptance condition by this clause.
        #[arg(long)]
        acc_override: Option<String>,
    },
    /// Decide L(A) ⊆ L(B); exit 0 if included, 1 if not, 2 on error.
    CheckInclusion { a: String, b: String },
    /// Rewrite the acceptance condition and print the result.
    Transform {
        file: String,
        #[arg(long, value_enum)]
        to: Target,
    },
    /// Solve a game (HOA with `controllable-AP`, or an integer game).
    SolveGame {
        file: String,
        #[arg(long, value_enum, default_value = "pg-exact")]
        engine: EngineArg,
        /// Print the winner's strategy.
        #[arg(long)]
        strategy: bool,
    },
    /// Print a seeded random instance.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Formula for `sat-hoa` (HOA label syntax) or `qbf2-hog`
        /// (`forall x exists y φ`); random when absent.
        #[arg(long)]
        formula: Option<String>,
        /// Acceptance family for `hoa`, `hog` and `int-game`.
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 4)]
        states: usize,
        /// Propositions (`hoa`, `sat-hoa`) or propositions per player (`hog`).
        #[arg(long, default_value_t = 2)]
        props: usize,
        #[arg(long, default_value_t = 3)]
        colors: u32,
        /// Domain bound for `int-game`.
        #[arg(long, default_value_t = 4)]
        domain: i64,
        /// Emit the safety variant (`sat-hoa`, `qbf2-hog`).
        #[arg(long)]
        safety: bool,
    },
    /// Run a brute-force agreement suite (or `all`).
    CrossCheck {
        suite: String,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    StateBased,
    Buchi,
    Streett,
    Cobuchi,
    ReachToBuchi,
    SafetyToCobuchi,
    MullerToStreett,
    RabinToBuchi,
    ElToBuchi,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    PgExact,
    PgFull,
    Direct,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Hoa,
    Hog,
    SatHoa,
    Qbf2Hog,
    IntGame,
}

/// A command's result: text lines, the JSON object, and the exit code.
struct Outcome {
    text: String,
    json: Value,
    code: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let bounds = Bounds::from_env();
    let start = Instant::now();
    match run(&cli.command, &bounds) {
        Ok(mut out) => {
            if cli.json {
                if let Value::Object(m) = &mut out.json {
                    m.insert("timings".into(), json!({ "total_ms": start.elapsed().as_secs_f64() * 1e3 }));
                }
                println!("{}", out.json);
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "verdict": "ERROR", "error": e }));
            }
            eprintln!("hanoi: {e}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &str) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
}

fn load_automaton(path: &str) -> Result<Automaton, String> {
    parse_automaton(&read(path)?).map_err(|e| format!("{path}: {e}"))
}

fn run(cmd: &Command, bounds: &Bounds) -> Result<Outcome, String> {
    match cmd {
        Command::CheckEmpty { file, acc_override } => check_empty(file, acc_override.as_deref()),
        Command::CheckInclusion { a, b } => check_inclusion(a, b, bounds),
        Command::Transform { file, to } => transform(file, *to),
        Command::SolveGame { file, engine, strategy } => solve_game(file, *engine, *strategy, bounds),
        Command::Gen {
            kind,
            seed,
            formula,
            family,
            states,
            props,
            colors,
            domain,
            safety,
        } => {
            let text = generate(
                *kind,
                *seed,
                formula.as_deref(),
                family.as_deref(),
                (*states, *props, *colors, *domain),
                *safety,
            )?;
            Ok(Outcome {
                json: json!({ "verdict": "GENERATED", "instance": text }),
                text,
                code: 0,
            })
        }
        Command::CrossCheck { suite, count, seed } => cross_check(suite, *count, *seed),
    }
}

fn check_empty(file: &str, acc_override: Option<&str>) -> Result<Outcome, String> {
    let mut a = load_automaton(file)?;
    if let Some(clause) = acc_override {
        a.acc = parse_acceptance(clause, None, a.hoa.index).map_err(|e| e.to_string())?;
    }
    let sizes = json!({ "states": a.hoa.num_states(), "transitions": a.hoa.transitions.len() });
    Ok(match is_empty(&a) {
        Verdict::Empty => Outcome {
            text: "EMPTY\n".into(),
            json: json!({ "verdict": "EMPTY", "witness": null, "sizes": sizes }),
            code: 1,
        },
        Verdict::Nonempty(l) => {
            let lasso = l.format(&a.hoa);
            Outcome {
                text: format!("NONEMPTY {lasso}\n"),
                json: json!({ "verdict": "NONEMPTY", "witness": lasso, "sizes": sizes }),
                code: 0,
            }
        }
    })
}

fn check_inclusion(a: &str, b: &str, bounds: &Bounds) -> Result<Outcome, String> {
    let (a, b) = (load_automaton(a)?, load_automaton(b)?);
    let sizes = json!({ "a_states": a.hoa.num_states(), "b_states": b.hoa.num_states() });
    Ok(match included(&a, &b, bounds).map_err(|e| e.to_string())? {
        Inclusion::Included => Outcome {
            text: "INCLUDED\n".into(),
            json: json!({ "verdict": "INCLUDED", "witness": null, "sizes": sizes }),
            code: 0,
        },
        Inclusion::NotIncluded { word, run } => {
            let lasso = run.format(&a.hoa);
            Outcome {
                text: format!("NOT-INCLUDED {lasso}\nword: {}\n", word.format()),
                json: json!({
                    "verdict": "NOT-INCLUDED",
                    "witness": { "run": lasso, "word": word.format() },
                    "sizes": sizes,
                }),
                code: 1,
            }
        }
    })
}

fn transform(file: &str, to: Target) -> Result<Outcome, String> {
    let a = load_automaton(file)?;
    let t: Transformed = match to {
        Target::StateBased => Ok(to_state_based(&a)),
        Target::Buchi => to_buchi(&a),
        Target::Streett | Target::MullerToStreett => muller_to_streett(&a),
        Target::Cobuchi | Target::SafetyToCobuchi => safety_to_cobuchi(&a),
        Target::ReachToBuchi => reach_to_buchi(&a),
        Target::RabinToBuchi => rabin_to_buchi(&a),
        Target::ElToBuchi => el_to_buchi(&a),
    }
    .map_err(|e| e.to_string())?;
    let out = t.automaton();
    let text = print_hoa(&out);
    Ok(Outcome {
        json: json!({
            "verdict": "TRANSFORMED",
            "witness": text,
            "sizes": { "states": out.hoa.num_states(), "transitions": out.hoa.transitions.len() },
        }),
        text,
        code: 0,
    })
}

fn winner_name(p: Player) -> &'static str {
    match p {
        Player::Out => "controller",
        Player::In => "environment",
    }
}

fn solve_game(file: &str, engine: EngineArg, strategy: bool, bounds: &Bounds) -> Result<Outcome, String> {
    let text = read(file)?;
    if text.lines().any(|l| l.trim_start().starts_with("domain:")) {
        return solve_int_game(&text, strategy, bounds);
    }
    let g = match parse_hoa(&text).map_err(|e| format!("{file}: {e}"))? {
        Parsed::Game(g) => g,
        Parsed::Automaton(_) => return Err(format!("{file}: no controllable-AP header, not a game")),
    };
    let opts = SolveOptions {
        engine: match engine {
            EngineArg::PgExact => Engine::PgExact,
            EngineArg::PgFull => Engine::PgFull,
            EngineArg::Direct => Engine::Direct,
        },
        strategies: strategy,
        bounds: *bounds,
    };
    let rep = solve_hog(&g, &opts).map_err(|e| e.to_string())?;
    let mut out = format!("WINNER: {}\n", winner_name(rep.winner));
    let mut witness = Value::Null;
    if strategy {
        let lines = strategy_lines(&g, &rep);
        witness = json!(lines);
        for l in lines {
            out.push_str(&l);
            out.push('\n');
        }
    }
    Ok(Outcome {
        text: out,
        json: json!({
            "verdict": winner_name(rep.winner),
            "witness": witness,
            "sizes": sizes_json(&rep.sizes),
        }),
        code: 0,
    })
}

fn sizes_json(s: &GameSizes) -> Value {
    json!({
        "arena_states": s.arena_states,
        "pg_vertices": s.pg_vertices,
        "pg_edges": s.pg_edges,
        "out_memory": s.out_memory,
    })
}

fn assignment(g: &Hog, props: &[PropId], bits: u64) -> String {
    let parts: Vec<String> = props
        .iter()
        .enumerate()
        .map(|(i, p)| format!("{}={}", g.hoa.props[p.index()], bits >> i & 1))
        .collect();
    if parts.is_empty() {
        "-".into()
    } else {
        parts.join(",")
    }
}

fn arena_state_name(g: &Hog, rep: &WinningReport, s: usize) -> String {
    let q = rep.arena.origin[s];
    let name = g.hoa.state_names.get(q).cloned().flatten().unwrap_or_else(|| q.to_string());
    if rep.arena.delayed {
        format!("{name}/{}", rep.arena.color[s])
    } else {
        name
    }
}

/// In: one line per arena state, `state: inputs -> successors`.  Out: the
/// memory update table and `state memory: inputs -> outputs` per action.
fn strategy_lines(g: &Hog, rep: &WinningReport) -> Vec<String> {
    let mut lines = Vec::new();
    if let Some(InStrategy { choice }) = &rep.in_strategy {
        lines.push("strategy environment".into());
        for (&s, (v, succ)) in choice {
            let succ: Vec<String> = succ.iter().map(|&t| arena_state_name(g, rep, t)).collect();
            lines.push(format!(
                "  {}: {} -> {{{}}}",
                arena_state_name(g, rep, s),
                assignment(g, &g.inputs, v.bits_over(&g.inputs)),
                succ.join(",")
            ));
        }
    }
    if let Some(m) = &rep.out_strategy {
        lines.extend(machine_lines(g, rep, m));
    }
    if rep.in_strategy.is_none() && rep.out_strategy.is_none() {
        lines.push("strategy unavailable for this game".into());
    }
    lines
}

fn machine_lines(g: &Hog, rep: &WinningReport, m: &OutMachine) -> Vec<String> {
    let mut lines = vec![format!(
        "strategy controller memory {} initial m{}",
        m.memory_size, m.initial_memory
    )];
    for (k, row) in m.update.iter().enumerate() {
        if !row.is_empty() {
            let cells: Vec<String> = row.iter().enumerate().map(|(c, n)| format!("{c}:m{n}")).collect();
            lines.push(format!("  update m{k}: {}", cells.join(" ")));
        }
    }
    for (&(s, mem, v_in), &v_out) in &m.action {
        lines.push(format!(
            "  {} m{mem}: {} -> {}",
            arena_state_name(g, rep, s),
            assignment(g, &g.inputs, v_in),
            assignment(g, &g.outputs, v_out)
        ));
    }
    lines
}

fn solve_int_game(text: &str, strategy: bool, bounds: &Bounds) -> Result<Outcome, String> {
    let (g, o) = parse_int_game(text, bounds).map_err(|e| e.to_string())?;
    let rep = solve_fgame(&g, &o, bounds).map_err(|e| e.to_string())?;
    let mut out = format!("WINNER: {}\n", winner_name(rep.winner));
    let mut choices = Vec::new();
    // only In's input choices are extracted for theory games
    if strategy && rep.winner == Player::In {
        out.push_str("strategy environment\n");
        for ((q, c), w) in &rep.in_choices {
            let vals: Vec<String> = o.inputs.iter().zip(w).map(|(n, v)| format!("{n}={v}")).collect();
            let line = format!("  {q}/{c}: {}", vals.join(","));
            out.push_str(&line);
            out.push('\n');
            choices.push(line.trim().to_string());
        }
    }
    Ok(Outcome {
        text: out,
        json: json!({
            "verdict": winner_name(rep.winner),
            "witness": if strategy { json!(choices) } else { Value::Null },
            "sizes": {
                "arena_states": rep.arena_states,
                "pg_vertices": rep.pg_vertices,
                "pg_edges": rep.pg_edges,
            },
        }),
        code: 0,
    })
}

fn family_arg(r: &mut gen::Rand, name: Option<&str>) -> Result<Family, String> {
    match name {
        Some(n) => Family::from_name(n).ok_or_else(|| {
            let known: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
            format!("unknown family {n:?}; expected one of {}", known.join(", "))
        }),
        None => Ok(gen::pick(r, &Family::ALL)),
    }
}

fn generate(
    kind: GenKind,
    seed: u64,
    formula: Option<&str>,
    family: Option<&str>,
    (states, props, colors, domain): (usize, usize, u32, i64),
    safety: bool,
) -> Result<String, String> {
    let r = &mut gen::rng(seed, 0);
    let positive = |what: &str, v: usize| if v == 0 { Err(format!("--{what} must be positive")) } else { Ok(v) };
    Ok(match kind {
        GenKind::Hoa => {
            let fam = family_arg(r, family)?;
            let shape = HoaShape {
                max_states: positive("states", states)?,
                max_props: props,
                max_index: positive("colors", colors as usize)? as u32,
                max_out: 3,
            };
            let hoa = gen::hoa(r, shape);
            let acc = gen::acceptance(r, fam, hoa.index);
            print_hoa(&Automaton { hoa, acc })
        }
        GenKind::Hog => {
            let fam = family_arg(r, family)?;
            let g = gen::hog(r, fam, positive("states", states)?, props, positive("colors", colors as usize)? as u32);
            print_hog(&g)
        }
        GenKind::SatHoa => {
            let (phi, n) = match formula {
                Some(f) => {
                    let phi = parse_label(f).map_err(|e| e.to_string())?;
                    let n = phi.max_atom().map_or(0, |p| p.index() + 1);
                    (phi, n)
                }
                None => {
                    let n = positive("props", props)?;
                    (gen::formula(r, n as u32, 3), n)
                }
            };
            let c = ColorSet::singleton(2);
            let acc = if safety { Acceptance::Safety(c) } else { Acceptance::Reachability(c) };
            print_hoa(&Automaton {
                hoa: fixtures::sat_automaton(&phi, n),
                acc,
            })
        }
        GenKind::Qbf2Hog => {
            let q = match formula {
                Some(f) => parse_qbf2(f).map_err(|e| e.to_string())?,
                None => gen::qbf2(r, props.max(1), props.max(1)),
            };
            let (reach, safe) = hog_from_qbf2(&q);
            print_hog(if safety { &safe } else { &reach })
        }
        GenKind::IntGame => {
            let fam = family_arg(r, family)?;
            if domain < 1 {
                return Err("--domain must be positive".into());
            }
            let (g, o) = gen::int_game(r, fam, domain);
            print_int_game(&g, &o)
        }
    })
}

fn suite_row(r: &SuiteReport) -> String {
    format!(
        "{:<14} {:>6} {:>6} {:>6} {:>9.2}s  {}  {}",
        r.name,
        r.total,
        r.passed,
        r.total - r.passed,
        r.elapsed.as_secs_f64(),
        if r.ok() { "PASS" } else { "FAIL" },
        r.summary()
    )
}

fn cross_check(suite: &str, count: Option<usize>, seed: u64) -> Result<Outcome, String> {
    let names: Vec<&str> = if suite == "all" {
        SUITES.iter().map(|s| s.0).collect()
    } else if default_count(suite).is_some() {
        vec![suite]
    } else {
        let known: Vec<&str> = SUITES.iter().map(|s| s.0).collect();
        return Err(format!("unknown suite {suite:?}; expected one of {} or all", known.join(", ")));
    };
    let mut text = format!(
        "{:<14} {:>6} {:>6} {:>6} {:>10}  {}\n",
        "suite", "total", "agree", "differ", "time", "status"
    );
    let mut rows = Vec::new();
    let mut ok = true;
    for name in names {
        let n = count.unwrap_or_else(|| default_count(name).expect("known suite"));
        let rep = run_suite(name, n, seed).expect("known suite");
        ok &= rep.ok();
        text.push_str(&suite_row(&rep));
        text.push('\n');
        for f in &rep.failures {
            text.push_str(&format!("  {f}\n"));
        }
        rows.push(json!({
            "suite": rep.name,
            "total": rep.total,
            "agree": rep.passed,
            "skipped": rep.skipped,
            "failures": rep.failures,
            "seconds": rep.elapsed.as_secs_f64(),
        }));
    }
    Ok(Outcome {
        text,
        json: json!({ "verdict": if ok { "AGREE" } else { "DISAGREE" }, "witness": rows, "sizes": null }),
        code: if ok { 0 } else { 1 },
    })
}
