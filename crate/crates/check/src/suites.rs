//! Cross-check suites: each instance is generated from its own stream,
//! solved by the library and by the references in [`crate::oracle`], and
//! counted as agreeing or not.

use std::time::{Duration, Instant};

use hanoi::analysis::{check_lasso_bound, included, is_empty, shrink_lasso, Inclusion, Lasso, Verdict};
use hanoi::fixtures::sat_automaton;
use hanoi::games::{
    certify_in_strategy, extract_order_profile, hog_from_qbf2, solve_hog, verify_order_profile, verify_out_machine,
    Engine, Hog, Player, SolveOptions,
};
use hanoi::symbolic::{fgame_from_hog, solve_fgame, IntGuard, IntOracle, TheoryOracle};
use hanoi::transforms::{el_to_buchi, muller_to_streett, rabin_to_buchi, reach_to_buchi, safety_to_cobuchi, to_state_based};
use hanoi::{Acceptance, Automaton, Bounds, ColorSet};
use rand::Rng;
use rayon::prelude::*;

use crate::gen::{self, Family, HoaShape, Rand};
use crate::oracle;

/// Failure messages kept per suite; the count covers all of them.
const KEPT_FAILURES: usize = 20;

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub total: usize,
    pub passed: usize,
    /// Instances the suite's property does not apply to (counted as passed).
    pub skipped: usize,
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }

    pub fn summary(&self) -> String {
        format!("{}/{} agree", self.passed, self.total)
    }
}

/// Whether an instance was checked or did not fall under the property.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    Checked,
    Skipped,
}

type Check = fn(&mut Rand, u64) -> Result<Outcome, String>;

/// Suite names with their default instance counts.
pub const SUITES: &[(&str, usize)] = &[
    ("emptiness", 1000),
    ("sat", 200),
    ("lasso-bound", 200),
    ("transforms", 600),
    ("games", 300 * 9),
    ("certify", 300 * 9),
    ("boolean", 300 * 9),
    ("qbf", 100),
    ("symbolic", 100),
    ("int-sentences", 500),
    ("inclusion", 100),
];

fn check_of(name: &str) -> Option<(&'static str, Check)> {
    let f: Check = match name {
        "emptiness" => |r, i| emptiness(r, i).map(|_| Outcome::Checked),
        "sat" => |r, i| sat(r, i).map(|_| Outcome::Checked),
        "lasso-bound" => |r, i| lasso_bound(r, i).map(|_| Outcome::Checked),
        "transforms" => |r, i| transforms(r, i).map(|_| Outcome::Checked),
        "games" => |r, i| games(r, i).map(|_| Outcome::Checked),
        "certify" => certify,
        "boolean" => |r, i| boolean(r, i).map(|_| Outcome::Checked),
        "qbf" => |r, i| qbf(r, i).map(|_| Outcome::Checked),
        "symbolic" => |r, i| symbolic(r, i).map(|_| Outcome::Checked),
        "int-sentences" => |r, i| int_sentences(r, i).map(|_| Outcome::Checked),
        "inclusion" => |r, i| inclusion(r, i).map(|_| Outcome::Checked),
        _ => return None,
    };
    let name = SUITES.iter().find(|s| s.0 == name)?.0;
    Some((name, f))
}

pub fn default_count(name: &str) -> Option<usize> {
    SUITES.iter().find(|s| s.0 == name).map(|s| s.1)
}

/// Runs `count` instances of the named suite in parallel.
pub fn run_suite(name: &str, count: usize, seed: u64) -> Option<SuiteReport> {
    let (name, check) = check_of(name)?;
    let start = Instant::now();
    let results: Vec<(u64, Result<Outcome, String>)> = (0..count as u64)
        .into_par_iter()
        .map(|i| (i, check(&mut gen::rng(seed, i), i)))
        .collect();
    let skipped = results.iter().filter(|r| r.1 == Ok(Outcome::Skipped)).count();
    let failures: Vec<(u64, String)> = results.into_iter().filter_map(|(i, r)| r.err().map(|e| (i, e))).collect();
    let failed = failures.len();
    Some(SuiteReport {
        name,
        total: count,
        passed: count - failed,
        skipped,
        failures: failures
            .into_iter()
            .take(KEPT_FAILURES)
            .map(|(i, e)| format!("instance {i}: {e}"))
            .collect(),
        elapsed: start.elapsed(),
    })
}

fn family(i: u64) -> Family {
    Family::ALL[i as usize % Family::ALL.len()]
}

fn random_automaton(r: &mut Rand, family: Family, shape: HoaShape) -> Automaton {
    let hoa = gen::hoa(r, shape);
    let acc = gen::acceptance(r, family, hoa.index);
    Automaton { hoa, acc }
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, reference says {want:?}"))
    }
}

fn emptiness(r: &mut Rand, i: u64) -> Result<(), String> {
    let shape = HoaShape {
        max_states: 6,
        max_props: 4,
        max_index: 4,
        max_out: 3,
    };
    let a = random_automaton(r, family(i), shape);
    let verdict = is_empty(&a);
    expect("nonempty", !verdict.is_empty(), oracle::explicit_nonempty(&a))?;
    if let Verdict::Nonempty(l) = verdict {
        oracle::check_lasso(&a, &l).map_err(|e| format!("bad witness: {e}"))?;
    }
    Ok(())
}

fn sat(r: &mut Rand, _: u64) -> Result<(), String> {
    let props = r.gen_range(1..=10);
    let phi = gen::formula(r, props as u32, 4);
    let want = oracle::truth_table_sat(&phi, props);
    for acc in [
        Acceptance::Reachability(ColorSet::singleton(2)),
        Acceptance::Safety(ColorSet::singleton(2)),
    ] {
        let a = Automaton {
            hoa: sat_automaton(&phi, props),
            acc,
        };
        let verdict = is_empty(&a);
        expect("satisfiable", !verdict.is_empty(), want)?;
        if let Verdict::Nonempty(l) = verdict {
            oracle::check_lasso(&a, &l).map_err(|e| format!("bad witness: {e}"))?;
        }
    }
    Ok(())
}

/// Repeats the cycle into the prefix and unrolls it, keeping the lasso valid.
fn inflate(l: &Lasso) -> Lasso {
    let mut prefix = l.prefix.clone();
    prefix.extend(l.cycle.iter().cloned());
    prefix.extend(l.cycle.iter().cloned());
    Lasso {
        prefix,
        cycle: (0..3).flat_map(|_| l.cycle.iter().cloned()).collect(),
    }
}

fn lasso_bound(r: &mut Rand, i: u64) -> Result<(), String> {
    let shape = HoaShape {
        max_states: 5,
        max_props: 3,
        max_index: 4,
        max_out: 3,
    };
    let a = (0..200)
        .map(|_| random_automaton(r, family(i), shape))
        .find(oracle::explicit_nonempty)
        .ok_or("no nonempty instance generated")?;
    let report = check_lasso_bound(&a).map_err(|e| e.to_string())?;
    let d = a.hoa.index.max(1) as usize;
    expect("bound", report.bound, (a.hoa.num_states() * d).pow(2))?;
    if !report.holds() {
        return Err(format!(
            "lasso ({}, {}) exceeds {}",
            report.prefix_len, report.cycle_len, report.bound
        ));
    }
    oracle::check_lasso(&report.state_based, &report.lasso).map_err(|e| format!("bad witness: {e}"))?;
    let sb = &report.state_based;
    let long = inflate(&report.lasso);
    oracle::check_lasso(sb, &long).map_err(|e| format!("inflation broke the lasso: {e}"))?;
    let short = shrink_lasso(&sb.hoa, &long).map_err(|e| e.to_string())?;
    oracle::check_lasso(sb, &short).map_err(|e| format!("shrinking broke the lasso: {e}"))?;
    let q2 = sb.hoa.num_states().pow(2);
    if short.prefix.len() > q2 || short.cycle.len() > q2 {
        return Err(format!(
            "shrunk lasso ({}, {}) exceeds |Q|² = {q2}",
            short.prefix.len(),
            short.cycle.len()
        ));
    }
    Ok(())
}

fn transforms(r: &mut Rand, i: u64) -> Result<(), String> {
    let shape = HoaShape {
        max_states: 4,
        max_props: 3,
        max_index: 3,
        max_out: 3,
    };
    let kind = i % 6;
    let fam = match kind {
        0 => family(i / 6),
        1 => Family::Reachability,
        2 => Family::Safety,
        3 => Family::Muller,
        4 => Family::Rabin,
        _ => [Family::EmersonLei, Family::Parity, Family::Streett][(i / 6 % 3) as usize],
    };
    let a = random_automaton(r, fam, shape);
    let n = a.hoa.num_states();
    let d = a.hoa.index.max(1) as usize;
    let (t, limit, what) = match kind {
        0 => {
            let t = to_state_based(&a);
            if !t.hoa.is_state_based() {
                return Err("to_state_based output is not state-based".into());
            }
            let outgoing = a.hoa.outgoing();
            let dead = outgoing.iter().filter(|o| o.is_empty()).count();
            let edges = (a.hoa.transitions.len() + dead) * d;
            if t.hoa.transitions.len() > edges {
                return Err(format!("{} transitions, limit {edges}", t.hoa.transitions.len()));
            }
            (t, n * d, "state-based")
        }
        1 => (reach_to_buchi(&a).map_err(|e| e.to_string())?, 2 * n, "reach-to-buchi"),
        2 => (safety_to_cobuchi(&a).map_err(|e| e.to_string())?, n + 1, "safety-to-cobuchi"),
        3 => {
            let k = match &a.acc {
                Acceptance::Muller(s) => s.len(),
                _ => unreachable!(),
            };
            (muller_to_streett(&a).map_err(|e| e.to_string())?, 2 * k * n * d, "muller-to-streett")
        }
        4 => {
            let k = match &a.acc {
                Acceptance::Rabin(p) => p.len(),
                _ => unreachable!(),
            };
            (rabin_to_buchi(&a).map_err(|e| e.to_string())?, 2 * k * n * d, "rabin-to-buchi")
        }
        _ => {
            let size = a.acc.to_el().expect("prefix-independent").size();
            (el_to_buchi(&a).map_err(|e| e.to_string())?, (1 << size) * 2 * size * n, "el-to-buchi")
        }
    };
    if t.hoa.num_states() > limit {
        return Err(format!("{what}: {} states, limit {limit}", t.hoa.num_states()));
    }
    let b = t.automaton();
    b.hoa.validate().map_err(|e| format!("{what}: {e}"))?;
    if let Some(w) = oracle::find_lasso_word(&a, &b, 4, &|x, y| x != y) {
        return Err(format!("{what}: languages differ on {}", w.format()));
    }
    Ok(())
}

fn game_shape(r: &mut Rand, fam: Family) -> Hog {
    gen::hog(r, fam, 4, 2, 3)
}

fn games(r: &mut Rand, i: u64) -> Result<(), String> {
    let g = game_shape(r, family(i));
    let want = oracle::solve_explicit(&oracle::hog_game(&g), &g.acc);
    for engine in [Engine::PgExact, Engine::PgFull, Engine::Direct] {
        let opts = SolveOptions {
            engine,
            strategies: true,
            bounds: Bounds::default(),
        };
        let rep = solve_hog(&g, &opts).map_err(|e| format!("{engine:?}: {e}"))?;
        expect(&format!("{engine:?} winner"), rep.winner, want)?;
        if let Some(m) = &rep.out_strategy {
            if rep.winner != Player::Out || !verify_out_machine(&g, m, &opts.bounds).map_err(|e| e.to_string())? {
                return Err(format!("{engine:?}: Out strategy does not win"));
            }
        }
        if let Some(s) = &rep.in_strategy {
            if rep.winner != Player::In || !certify_in_strategy(&g, s).map_err(|e| e.to_string())? {
                return Err(format!("{engine:?}: In strategy does not win"));
            }
        }
    }
    Ok(())
}

/// The games suite's instances as oracle games over the Boolean theory.
fn boolean(r: &mut Rand, i: u64) -> Result<(), String> {
    let g = game_shape(r, family(i));
    let want = solve_hog(&g, &SolveOptions::default()).map_err(|e| e.to_string())?.winner;
    let (f, o) = fgame_from_hog(&g);
    let rep = solve_fgame(&f, &o, &Bounds::default()).map_err(|e| e.to_string())?;
    expect("oracle-game winner", rep.winner, want)
}

/// Certification on the instances of the games suite: In strategies for
/// In-won games whose condition is Streett-like (In's objective is then
/// Rabin, won positionally) and order profiles for Out-won Rabin-like games.
fn certify(r: &mut Rand, i: u64) -> Result<Outcome, String> {
    let fam = family(i);
    let g = game_shape(r, fam);
    let streett_like = matches!(fam, Family::Streett | Family::Buchi | Family::CoBuchi | Family::Parity);
    let rabin_like = matches!(fam, Family::Rabin | Family::Buchi | Family::CoBuchi | Family::Parity);
    let bounds = Bounds::default();
    match oracle::solve_explicit(&oracle::hog_game(&g), &g.acc) {
        Player::In if streett_like => {
            let opts = SolveOptions {
                strategies: true,
                ..SolveOptions::default()
            };
            let rep = solve_hog(&g, &opts).map_err(|e| e.to_string())?;
            let s = rep.in_strategy.ok_or("no In strategy")?;
            if !certify_in_strategy(&g, &s).map_err(|e| e.to_string())? {
                return Err("In strategy not certified".into());
            }
            Ok(Outcome::Checked)
        }
        Player::Out if rabin_like => {
            let p = extract_order_profile(&g, &bounds).map_err(|e| e.to_string())?;
            if !verify_order_profile(&g, &p, &bounds).map_err(|e| e.to_string())? {
                return Err("order profile does not win".into());
            }
            Ok(Outcome::Checked)
        }
        _ => Ok(Outcome::Skipped),
    }
}

fn qbf(r: &mut Rand, _: u64) -> Result<(), String> {
    let q = gen::qbf2(r, 4, 4);
    let truth = oracle::qbf_true(&q);
    let want = if truth { Player::Out } else { Player::In };
    let (reach, safe) = hog_from_qbf2(&q);
    for (name, g) in [("reachability", reach), ("safety", safe)] {
        expect(&format!("{name} reference"), oracle::solve_explicit(&oracle::hog_game(&g), &g.acc), want)?;
        let rep = solve_hog(&g, &SolveOptions::default()).map_err(|e| e.to_string())?;
        expect(&format!("{name} winner"), rep.winner, want)?;
    }
    Ok(())
}

fn symbolic(r: &mut Rand, i: u64) -> Result<(), String> {
    let (g, o) = gen::int_game(r, family(i), 8);
    let want = oracle::solve_explicit(&oracle::int_game(&g, &o), &g.acc);
    let rep = solve_fgame(&g, &o, &Bounds::default()).map_err(|e| e.to_string())?;
    expect("winner", rep.winner, want)
}

fn int_sentences(r: &mut Rand, _: u64) -> Result<(), String> {
    let domain = r.gen_range(0..=4);
    let ni = r.gen_range(1..=2);
    let no = r.gen_range(0..=2);
    let o = IntOracle::new(
        domain,
        (0..ni).map(|k| format!("x{k}")).collect(),
        (0..no).map(|k| format!("y{k}")).collect(),
        &Bounds::default(),
    )
    .map_err(|e| e.to_string())?;
    let phi = gen::int_guard(r, ni + no, domain, 3);
    let psi = gen::int_guard(r, ni + no, domain, 2);
    let not = |g: &IntGuard| IntGuard::Not(Box::new(g.clone()));
    let got = o.exists_forall_avoid(&[&phi, &psi]).map_err(|e| e.to_string())?;
    let want = oracle::int_exists_forall(&IntGuard::And(vec![not(&phi), not(&psi)]), &o);
    expect("∃∀ witness", got, want)?;
    let got = o.forall_exists_reach(&[&phi]).map_err(|e| e.to_string())?;
    expect("∀∃", got, oracle::int_exists_forall(&not(&phi), &o).is_none())?;
    let both = IntGuard::And(vec![phi.clone(), psi.clone()]);
    let got = o.satisfiable(&[&phi, &psi]).map_err(|e| e.to_string())?;
    let all = IntOracle {
        inputs: o.inputs.iter().chain(&o.outputs).cloned().collect(),
        outputs: Vec::new(),
        domain,
    };
    expect("∃∃", got, oracle::int_exists_forall(&both, &all).is_some())?;
    let got = o.valid_disjunction(&[&phi, &psi]).map_err(|e| e.to_string())?;
    let none = IntGuard::And(vec![not(&phi), not(&psi)]);
    expect("∀∀", got, oracle::int_exists_forall(&none, &all).is_none())
}

/// Words up to this length on each side of a lasso are searched for
/// inclusion counterexamples.
const INCLUSION_WORDS: usize = 6;

fn inclusion(r: &mut Rand, i: u64) -> Result<(), String> {
    let shape = HoaShape {
        max_states: 3,
        max_props: 2,
        max_index: 3,
        max_out: 3,
    };
    let bounds = Bounds::default();
    for _ in 0..100 {
        let fam = gen::pick(r, &Family::ALL);
        let a = random_automaton(r, fam, shape);
        let b = if i.is_multiple_of(2) {
            a.clone()
        } else {
            let fam = gen::pick(r, &Family::ALL);
            let mut b = random_automaton(r, fam, shape);
            b.hoa.props = a.hoa.props.clone();
            for t in &mut b.hoa.transitions {
                if t.guard.max_atom().is_some_and(|p| p.index() >= a.hoa.props.len()) {
                    t.guard = hanoi::Formula::True;
                }
            }
            b
        };
        let res = match included(&a, &b, &bounds) {
            Ok(res) => res,
            Err(hanoi::analysis::AnalysisError::Automaton(_)) => continue,
            Err(e) => return Err(e.to_string()),
        };
        let reference = oracle::find_lasso_word(&a, &b, INCLUSION_WORDS, &|x, y| x && !y);
        return match (res, reference) {
            (Inclusion::Included, None) => Ok(()),
            (Inclusion::Included, Some(w)) => Err(format!("reported included, but {} is a counterexample", w.format())),
            (Inclusion::NotIncluded { word, run }, _) => {
                if !oracle::accepts_word(&a, &word) || oracle::accepts_word(&b, &word) {
                    return Err(format!("{} is not a counterexample", word.format()));
                }
                oracle::check_lasso(&a, &run).map_err(|e| format!("bad run: {e}"))
            }
        };
    }
    Err("no instance within the inclusion bounds".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_runs_a_few_instances() {
        for (name, _) in SUITES {
            let rep = run_suite(name, 6, 11).unwrap();
            assert!(rep.ok(), "{name}: {:?}", rep.failures);
        }
    }

    #[test]
    fn reference_game_solver_on_the_arbiter() {
        let g = hanoi::fixtures::arbiter_game();
        assert_eq!(oracle::solve_explicit(&oracle::hog_game(&g), &g.acc), Player::Out);
    }
}
