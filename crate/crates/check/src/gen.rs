//! Seeded random instances.  Every generator draws from a ChaCha stream
//! selected by `(seed, index)`, so instance `i` of a suite is the same no
//! matter how the suite is split across threads.

use hanoi::games::{Hog, Qbf2};
use hanoi::symbolic::{Cmp, FGame, FTransition, IntGuard, IntOracle, LinAtom};
use hanoi::{AccFormula, Acceptance, Bounds, ColorId, ColorSet, Formula, Hoa, PropId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rand = ChaCha8Rng;

/// The generator for instance `index` of a run seeded with `seed`.
pub fn rng(seed: u64, index: u64) -> Rand {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

/// A uniformly chosen element.
pub fn pick<T: Copy>(r: &mut Rand, items: &[T]) -> T {
    *items.choose(r).expect("nonempty choice")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Reachability,
    Safety,
    Buchi,
    CoBuchi,
    Parity,
    Rabin,
    Streett,
    Muller,
    EmersonLei,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::Reachability,
        Family::Safety,
        Family::Buchi,
        Family::CoBuchi,
        Family::Parity,
        Family::Rabin,
        Family::Streett,
        Family::Muller,
        Family::EmersonLei,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Reachability => "reachability",
            Family::Safety => "safety",
            Family::Buchi => "buchi",
            Family::CoBuchi => "co-buchi",
            Family::Parity => "parity",
            Family::Rabin => "rabin",
            Family::Streett => "streett",
            Family::Muller => "muller",
            Family::EmersonLei => "emerson-lei",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == s)
    }
}

pub fn subset(r: &mut Rand, d: u32, nonempty: bool) -> ColorSet {
    loop {
        let s: ColorSet = (1..=d).filter(|_| r.gen_bool(0.5)).collect();
        if !nonempty || !s.is_empty() || d == 0 {
            return s;
        }
    }
}

fn el_formula(r: &mut Rand, d: u32, depth: u32) -> AccFormula {
    if depth == 0 || r.gen_bool(0.35) {
        let s = subset(r, d, true);
        return if r.gen_bool(0.5) { AccFormula::Inf(s) } else { AccFormula::Fin(s) };
    }
    let k = r.gen_range(2..=3);
    let items: Vec<AccFormula> = (0..k).map(|_| el_formula(r, d, depth - 1)).collect();
    if r.gen_bool(0.5) {
        AccFormula::and(items)
    } else {
        AccFormula::or(items)
    }
}

/// A random condition of `family` over colors `1..=d` (`d ≥ 1`).
pub fn acceptance(r: &mut Rand, family: Family, d: u32) -> Acceptance {
    match family {
        Family::Reachability => Acceptance::Reachability(subset(r, d, true)),
        Family::Safety => Acceptance::Safety(subset(r, d, false)),
        Family::Buchi => Acceptance::Buchi(subset(r, d, true)),
        Family::CoBuchi => Acceptance::CoBuchi(subset(r, d, true)),
        Family::Parity => Acceptance::Parity { colors: d },
        Family::Rabin => Acceptance::Rabin(
            (0..r.gen_range(1..=2))
                .map(|_| (subset(r, d, true), subset(r, d, false)))
                .collect(),
        ),
        Family::Streett => Acceptance::Streett(
            (0..r.gen_range(1..=2))
                .map(|_| (subset(r, d, true), subset(r, d, false)))
                .collect(),
        ),
        Family::Muller => Acceptance::Muller((0..r.gen_range(1..=3)).map(|_| subset(r, d, true)).collect()),
        Family::EmersonLei => Acceptance::El(el_formula(r, d, 2)),
    }
}

/// A random propositional formula over atoms `0..props`.
pub fn formula(r: &mut Rand, props: u32, depth: u32) -> Formula {
    if props == 0 {
        return if r.gen_bool(0.8) { Formula::True } else { Formula::False };
    }
    if depth == 0 || r.gen_bool(0.3) {
        let a = Formula::atom(r.gen_range(0..props));
        return if r.gen_bool(0.5) { a } else { Formula::not(a) };
    }
    match r.gen_range(0..5) {
        0 => Formula::not(formula(r, props, depth - 1)),
        1 | 2 => Formula::and((0..r.gen_range(2..=3)).map(|_| formula(r, props, depth - 1))),
        _ => Formula::or((0..r.gen_range(2..=3)).map(|_| formula(r, props, depth - 1))),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct HoaShape {
    pub max_states: usize,
    pub max_props: usize,
    pub max_index: u32,
    /// Most transitions per state.
    pub max_out: usize,
}

/// A random (possibly nondeterministic, incomplete) automaton.  Guards may
/// be unsatisfiable; some states may have no transitions.
pub fn hoa(r: &mut Rand, shape: HoaShape) -> Hoa {
    let n = r.gen_range(1..=shape.max_states);
    let props = r.gen_range(0..=shape.max_props);
    let d = r.gen_range(1..=shape.max_index);
    let mut h = Hoa::with_anonymous_props(n, props, d);
    if n > 1 && r.gen_bool(0.1) {
        h.initial.push(r.gen_range(1..n));
    }
    for q in 0..n {
        let k = r.gen_range(0..=shape.max_out);
        for _ in 0..k {
            let g = if r.gen_bool(0.15) { Formula::True } else { formula(r, props as u32, 2) };
            h.add_transition(q, g, r.gen_range(0..n), r.gen_range(1..=d));
        }
    }
    h
}

/// A random deterministic and complete arena: per state the letters are
/// split into at most three groups, one transition each.
pub fn arena(r: &mut Rand, max_states: usize, props: usize, d: u32) -> Hoa {
    let n = r.gen_range(1..=max_states);
    let mut h = Hoa::with_anonymous_props(n, props, d);
    let all: Vec<PropId> = (0..props as u32).map(PropId).collect();
    let letters = 1u64 << props;
    for q in 0..n {
        let k = r.gen_range(1..=3.min(letters as usize));
        let mut groups: Vec<Vec<u64>> = vec![Vec::new(); k];
        for l in 0..letters {
            groups[r.gen_range(0..k)].push(l);
        }
        for g in groups.into_iter().filter(|g| !g.is_empty()) {
            let guard = if g.len() as u64 == letters {
                Formula::True
            } else {
                Formula::or(g.iter().map(|&l| Formula::minterm(&all, l)))
            };
            h.add_transition(q, guard, r.gen_range(0..n), r.gen_range(1..=d));
        }
    }
    h
}

/// A random game with at most `max_states` states, `max_io` inputs and
/// `max_io` outputs (the outputs are the last propositions), and at most
/// `max_index` colors.
pub fn hog(r: &mut Rand, family: Family, max_states: usize, max_io: usize, max_index: u32) -> Hog {
    let nin = r.gen_range(0..=max_io);
    let nout = r.gen_range(0..=max_io);
    let d = r.gen_range(1..=max_index);
    let h = arena(r, max_states, nin + nout, d);
    let acc = acceptance(r, family, d);
    let outputs = (nin as u32..(nin + nout) as u32).map(PropId).collect();
    Hog::new(h, acc, outputs).expect("generated arenas are deterministic and complete")
}

/// `∀x ∃y φ` with `1..=max_x` universal and `1..=max_y` existential
/// variables.
pub fn qbf2(r: &mut Rand, max_x: usize, max_y: usize) -> Qbf2 {
    let nx = r.gen_range(1..=max_x);
    let ny = r.gen_range(1..=max_y);
    Qbf2 {
        universal: (0..nx).map(|i| format!("x{i}")).collect(),
        existential: (0..ny).map(|i| format!("y{i}")).collect(),
        matrix: formula(r, (nx + ny) as u32, 4),
    }
}

fn lin_atom(r: &mut Rand, vars: usize, domain: i64) -> LinAtom {
    let mut coeffs: Vec<i64> = (0..vars).map(|_| r.gen_range(-2..=2)).collect();
    if coeffs.iter().all(|&c| c == 0) {
        let v = r.gen_range(0..vars);
        coeffs[v] = if r.gen_bool(0.5) { 1 } else { -1 };
    }
    let cmp = *[Cmp::Lt, Cmp::Le, Cmp::Eq, Cmp::Ne, Cmp::Ge, Cmp::Gt].choose(r).unwrap();
    LinAtom {
        coeffs,
        constant: r.gen_range(-domain..=domain),
        cmp,
    }
}

/// A random guard over `vars` integer variables.
pub fn int_guard(r: &mut Rand, vars: usize, domain: i64, depth: u32) -> IntGuard {
    if depth == 0 || r.gen_bool(0.4) {
        return IntGuard::Atom(lin_atom(r, vars, domain));
    }
    match r.gen_range(0..3) {
        0 => IntGuard::Not(Box::new(int_guard(r, vars, domain, depth - 1))),
        1 => IntGuard::And((0..2).map(|_| int_guard(r, vars, domain, depth - 1)).collect()),
        _ => IntGuard::Or((0..2).map(|_| int_guard(r, vars, domain, depth - 1)).collect()),
    }
}

/// A random bounded-integer game with at most three states: per state one
/// or two atoms cut the variable space into cells, and the cells are
/// grouped into transitions, which keeps the arena deterministic and
/// complete.
pub fn int_game(r: &mut Rand, family: Family, max_domain: i64) -> (FGame<IntGuard>, IntOracle) {
    let domain = r.gen_range(1..=max_domain);
    let nin = r.gen_range(1..=2);
    let nout = r.gen_range(1..=2);
    let vars = nin + nout;
    let n = r.gen_range(1..=3);
    let d = r.gen_range(1..=3);
    let mut transitions = Vec::new();
    for q in 0..n {
        let atoms: Vec<IntGuard> = (0..r.gen_range(1..=2))
            .map(|_| IntGuard::Atom(lin_atom(r, vars, domain)))
            .collect();
        let cells: Vec<IntGuard> = (0..1usize << atoms.len())
            .map(|mask| {
                IntGuard::And(
                    atoms
                        .iter()
                        .enumerate()
                        .map(|(i, a)| match mask >> i & 1 {
                            1 => a.clone(),
                            _ => IntGuard::Not(Box::new(a.clone())),
                        })
                        .collect(),
                )
            })
            .collect();
        let k = r.gen_range(1..=cells.len());
        let mut groups: Vec<Vec<IntGuard>> = vec![Vec::new(); k];
        for c in cells {
            groups[r.gen_range(0..k)].push(c);
        }
        for g in groups.into_iter().filter(|g| !g.is_empty()) {
            transitions.push(FTransition {
                source: q,
                guard: IntGuard::Or(g),
                target: r.gen_range(0..n),
                color: r.gen_range(1..=d) as ColorId,
            });
        }
    }
    let acc = acceptance(r, family, d);
    let oracle = IntOracle::new(
        domain,
        (0..nin).map(|i| format!("x{i}")).collect(),
        (0..nout).map(|i| format!("y{i}")).collect(),
        &Bounds::default(),
    )
    .expect("domain within the default bound");
    let game = FGame {
        num_states: n,
        initial: 0,
        transitions,
        index: d,
        acc,
    };
    (game, oracle)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let shape = HoaShape {
            max_states: 5,
            max_props: 3,
            max_index: 3,
            max_out: 3,
        };
        assert_eq!(hoa(&mut rng(7, 3), shape), hoa(&mut rng(7, 3), shape));
        assert_ne!(hoa(&mut rng(7, 3), shape), hoa(&mut rng(7, 4), shape));
    }

    #[test]
    fn games_are_well_formed() {
        for i in 0..50 {
            let mut r = rng(1, i);
            let f = Family::ALL[i as usize % Family::ALL.len()];
            let g = hog(&mut r, f, 4, 2, 4);
            assert!(g.hoa.is_deterministic() && g.hoa.is_complete());
        }
    }
}
