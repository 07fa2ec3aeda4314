//! Small hand-made instances used throughout the tests and the CLI.

use crate::automaton::{Acceptance, ColorSet, Hoa};
use crate::formula::{Formula, PropId};
use crate::games::Hog;

/// Request/grant arbiter over `r` (proposition 0) and `g` (proposition 1):
/// every request is eventually granted and grants never happen twice in a
/// row.  States `q1..q4` are ids `0..3`; colors 1 and 2; state-based.
pub fn arbiter_automaton() -> Hoa {
    let r = || Formula::atom(0);
    let g = || Formula::atom(1);
    let nr = || Formula::not(r());
    let ng = || Formula::not(g());
    let mut a = Hoa::new(4, vec!["r".into(), "g".into()], 2);
    a.name = Some("arbiter".into());
    a.state_names = (1..=4).map(|i| Some(format!("q{i}"))).collect();
    a.add_transition(0, Formula::and([nr(), ng()]), 0, 1);
    a.add_transition(0, g(), 1, 1);
    a.add_transition(0, Formula::and([r(), ng()]), 2, 1);
    a.add_transition(1, Formula::and([nr(), ng()]), 0, 1);
    a.add_transition(1, Formula::and([r(), ng()]), 2, 1);
    a.add_transition(1, g(), 3, 1);
    a.add_transition(2, ng(), 2, 2);
    a.add_transition(2, g(), 1, 2);
    a.add_transition(3, Formula::True, 3, 2);
    a
}

/// `Inf({1})`.
pub fn arbiter_acceptance() -> Acceptance {
    Acceptance::Buchi(ColorSet::singleton(1))
}

/// The arbiter as a game: the environment sets `r`, the controller `g`.
pub fn arbiter_game() -> Hog {
    Hog::new(arbiter_automaton(), arbiter_acceptance(), vec![PropId(1)])
        .expect("the arbiter arena is deterministic and complete")
}

/// Two-state automaton whose language is nonempty under `Reachability({2})`
/// or `Safety({2})` iff `phi` is satisfiable: state 0 loops on `¬φ` with
/// color 1 and moves on `φ` with color 2 to state 1, which loops on `True`
/// with color 2.
pub fn sat_automaton(phi: &Formula, num_props: usize) -> Hoa {
    let mut a = Hoa::with_anonymous_props(2, num_props, 2);
    a.add_transition(0, Formula::not(phi.clone()), 0, 1);
    a.add_transition(0, phi.clone(), 1, 2);
    a.add_transition(1, Formula::True, 1, 2);
    a
}

/// Single state with a `True` self-loop of color 1, accepting under
/// `Inf({1})`: the universal language.
pub fn universal_automaton(num_props: usize) -> Hoa {
    let mut a = Hoa::with_anonymous_props(1, num_props, 1);
    a.add_transition(0, Formula::True, 0, 1);
    a
}
