//! Worked examples for formulas, HOA I/O, transformations and analysis,
//! exercised through the public API only.

use hanoi::analysis::{check_lasso_bound, included, is_empty, shrink_lasso, Inclusion, Lasso, Verdict};
use hanoi::fixtures::{arbiter_acceptance, arbiter_automaton, sat_automaton, universal_automaton};
use hanoi::hoa_io::{parse_automaton, parse_hoa, print_hoa, Parsed};
use hanoi::transforms::{
    el_to_buchi, muller_to_streett, rabin_to_buchi, reach_to_buchi, safety_to_cobuchi, to_state_based,
};
use hanoi::{
    exists_forall_sat, parse_label, sat, AccFormula, Acceptance, Automaton, Bounds, ColorSet, ColorTrace, Formula,
    Hoa, PropId, Valuation,
};

fn set(cs: &[u32]) -> ColorSet {
    cs.iter().copied().collect()
}

fn arbiter(acc: Acceptance) -> Automaton {
    Automaton { hoa: arbiter_automaton(), acc }
}

fn val(pairs: &[(u32, bool)]) -> Valuation {
    Valuation::from_pairs(pairs.iter().map(|&(p, b)| (PropId(p), b)))
}

#[test]
fn formula_semantics() {
    let r_not_g = parse_label("0 & !1").unwrap();
    assert_eq!(r_not_g, Formula::and([Formula::atom(0), Formula::not(Formula::atom(1))]));
    assert_eq!(r_not_g.eval(&val(&[(0, true), (1, false)])), Ok(true));
    assert_eq!(Formula::True.eval(&Valuation::default()), Ok(true));
    assert_eq!(parse_label("t").unwrap(), Formula::True);

    let p = Formula::atom(0);
    assert_eq!(sat(&Formula::and([p.clone(), Formula::not(p)])), None);
    let v = sat(&r_not_g).expect("satisfiable");
    assert_eq!((v.get(PropId(0)), v.get(PropId(1))), (Some(true), Some(false)));
}

#[test]
fn exists_forall() {
    // g is atom 0, r atom 1
    let (g, r) = (Formula::atom(0), Formula::atom(1));
    let w = exists_forall_sat(&[PropId(0)], &[PropId(1)], &Formula::or([g.clone(), Formula::not(r.clone())]))
        .expect("g = true works");
    assert_eq!(w.get(PropId(0)), Some(true));
    let iff = Formula::or([Formula::and([g.clone(), r.clone()]), Formula::and([Formula::not(g), Formula::not(r)])]);
    assert_eq!(exists_forall_sat(&[PropId(0)], &[PropId(1)], &iff), None);
}

#[test]
fn acceptance_on_traces() {
    let trace = ColorTrace { elem: set(&[1, 2]), occ_inf: set(&[1, 2]) };
    assert!(Acceptance::Buchi(set(&[1])).eval(&trace));
    assert!(!Acceptance::Safety(set(&[2])).eval(&ColorTrace { elem: set(&[1, 2]), occ_inf: set(&[2]) }));
}

#[test]
fn arbiter_structure() {
    let a = arbiter_automaton();
    assert!(a.is_deterministic());
    assert!(a.is_complete());
    assert!(a.is_state_based());
    let step = a.successor(0, &val(&[(0, false), (1, false)]));
    assert_eq!(step.len(), 1);
    assert_eq!((step[0].target, step[0].color), (0, 1));

    let mut overlap = Hoa::with_anonymous_props(1, 1, 1);
    overlap.add_transition(0, Formula::True, 0, 1);
    overlap.add_transition(0, Formula::True, 0, 1);
    assert!(!overlap.is_deterministic());
    let mut partial = Hoa::with_anonymous_props(1, 1, 1);
    partial.add_transition(0, Formula::atom(0), 0, 1);
    assert!(!partial.is_complete());
}

#[test]
fn explicit_letters() {
    let mut a = Hoa::new(1, vec!["r".into(), "g".into()], 1);
    a.add_transition(0, Formula::True, 0, 1);
    a.add_transition(0, Formula::and([Formula::atom(0), Formula::not(Formula::atom(0))]), 0, 1);
    let e = a.expand_explicit(8).unwrap();
    assert_eq!(e.transitions.len(), 4);
}

#[test]
fn minimal_document() {
    let text = "HOA: v1\nStates: 1\nStart: 0\nacc-name: Buchi\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0\n[t] 0 {0}\n--END--\n";
    let a = parse_automaton(text).unwrap();
    assert_eq!(a.hoa.num_states(), 1);
    assert_eq!(a.acc, Acceptance::Buchi(set(&[1])));
    assert_eq!(print_hoa(&a), text);
    assert_eq!(print_hoa(&a), print_hoa(&a.clone()));
}

#[test]
fn arbiter_document_is_a_game() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../cli/tests/data/arbiter.hoa")).unwrap();
    let Parsed::Game(g) = parse_hoa(&text).unwrap() else {
        panic!("controllable-AP makes a game");
    };
    assert_eq!(g.outputs, vec![PropId(1)]);
    assert_eq!(g.hoa.props, vec!["r".to_string(), "g".to_string()]);
    // no acc-name: the clause stays a plain formula
    assert_eq!(g.acc, Acceptance::El(AccFormula::Inf(set(&[1]))));
    for c in set(&[1, 2]).subsets() {
        assert_eq!(g.acc.eval_inf(c), arbiter_acceptance().eval_inf(c));
    }
}

#[test]
fn state_based_conversion() {
    let a = arbiter(arbiter_acceptance());
    let t = to_state_based(&a);
    assert_eq!(t.hoa.num_states(), 4);
    assert_eq!(t.hoa.transitions.len(), a.hoa.transitions.len());

    let mut two = Hoa::with_anonymous_props(1, 1, 2);
    two.add_transition(0, Formula::atom(0), 0, 1);
    two.add_transition(0, Formula::not(Formula::atom(0)), 0, 2);
    let t = to_state_based(&Automaton { hoa: two, acc: Acceptance::Buchi(set(&[1])) });
    assert_eq!(t.hoa.num_states(), 2);
    assert!(t.hoa.is_state_based());
}

#[test]
fn sat_reduction_automata() {
    let phi = parse_label("0 & !1").unwrap();
    let contradiction = parse_label("0 & !0").unwrap();
    for (f, nonempty) in [(&phi, true), (&contradiction, false)] {
        let hoa = sat_automaton(f, 2);
        let reach = Automaton { hoa: hoa.clone(), acc: Acceptance::Reachability(set(&[2])) };
        let safe = Automaton { hoa, acc: Acceptance::Safety(set(&[2])) };
        assert_eq!(!is_empty(&reach).is_empty(), nonempty);
        assert_eq!(!is_empty(&safe).is_empty(), nonempty);
        let b = reach_to_buchi(&reach).unwrap();
        assert_eq!(b.hoa.num_states(), 3);
        assert_eq!(!is_empty(&b.automaton()).is_empty(), nonempty);
        let c = safety_to_cobuchi(&safe).unwrap();
        assert_eq!(!is_empty(&c.automaton()).is_empty(), nonempty);
    }
    let none = reach_to_buchi(&arbiter(Acceptance::Reachability(ColorSet::empty()))).unwrap();
    assert!(is_empty(&none.automaton()).is_empty());
}

#[test]
fn muller_and_rabin_examples() {
    let mut one = Hoa::with_anonymous_props(1, 1, 1);
    one.add_transition(0, Formula::True, 0, 1);
    let s = muller_to_streett(&Automaton { hoa: one.clone(), acc: Acceptance::Muller(vec![set(&[1])]) }).unwrap();
    assert!(!is_empty(&s.automaton()).is_empty());
    let s = muller_to_streett(&Automaton { hoa: one.clone(), acc: Acceptance::Muller(vec![]) }).unwrap();
    assert!(is_empty(&s.automaton()).is_empty());

    let b = rabin_to_buchi(&Automaton { hoa: one.clone(), acc: Acceptance::Rabin(vec![(set(&[1]), ColorSet::empty())]) })
        .unwrap();
    assert!(!is_empty(&b.automaton()).is_empty());
    let b = rabin_to_buchi(&Automaton { hoa: one, acc: Acceptance::Rabin(vec![(set(&[1]), set(&[1]))]) }).unwrap();
    assert!(is_empty(&b.automaton()).is_empty());
}

#[test]
fn fin_on_the_arbiter() {
    // color 2 finitely often: from some point on the run stays in q1/q2
    let el = arbiter(Acceptance::El(AccFormula::Fin(set(&[2]))));
    let b = el_to_buchi(&el).unwrap().automaton();
    assert!(matches!(b.acc, Acceptance::Buchi(_)));
    let Verdict::Nonempty(l) = is_empty(&b) else { panic!("q1 idling is accepted") };
    l.check(&b).unwrap();
    let only_q3 = arbiter(Acceptance::El(AccFormula::and([AccFormula::Fin(set(&[2])), AccFormula::Inf(set(&[2]))])));
    assert!(is_empty(&el_to_buchi(&only_q3).unwrap().automaton()).is_empty());
}

#[test]
fn arbiter_emptiness() {
    let a = arbiter(arbiter_acceptance());
    let Verdict::Nonempty(l) = is_empty(&a) else { panic!("nonempty") };
    l.check(&a).unwrap();
    assert!(l.prefix.is_empty());
    assert_eq!(l.cycle.len(), 1);
    let t = &a.hoa.transitions[l.cycle[0].transition];
    assert_eq!((t.source, t.target, t.color), (0, 0, 1));
    assert_eq!(l.cycle[0].valuation, val(&[(0, false), (1, false)]));

    let r = check_lasso_bound(&a).unwrap();
    assert_eq!((r.prefix_len, r.cycle_len, r.bound), (0, 1, 64));
    assert!(r.holds());

    let mut dead = Hoa::with_anonymous_props(1, 1, 1);
    dead.add_transition(0, parse_label("0 & !0").unwrap(), 0, 1);
    assert!(is_empty(&Automaton { hoa: dead, acc: Acceptance::Buchi(set(&[1])) }).is_empty());
}

#[test]
fn lasso_shrinking() {
    let a = arbiter(arbiter_acceptance());
    let Verdict::Nonempty(l) = is_empty(&a) else { panic!("nonempty") };
    assert_eq!(shrink_lasso(&a.hoa, &l).unwrap(), l);
    let five = Lasso { prefix: Vec::new(), cycle: l.cycle.iter().cycle().take(5).cloned().collect() };
    let s = shrink_lasso(&a.hoa, &five).unwrap();
    assert_eq!(s.cycle.len(), 1);
    assert_eq!(s.trace(&a.hoa), five.trace(&a.hoa));
}

#[test]
fn inclusion_examples() {
    let a = arbiter(arbiter_acceptance());
    let b = Bounds::default();
    assert_eq!(included(&a, &a, &b).unwrap(), Inclusion::Included);
    let mut u = universal_automaton(2);
    u.props = a.hoa.props.clone();
    let u = Automaton { hoa: u, acc: Acceptance::Buchi(set(&[1])) };
    assert_eq!(included(&a, &u, &b).unwrap(), Inclusion::Included);
    match included(&u, &a, &b).unwrap() {
        Inclusion::NotIncluded { run, .. } => run.check(&u).unwrap(),
        Inclusion::Included => panic!("the arbiter rejects some words"),
    }
}
