//! The brute-force references on hand-checked instances, and the suite
//! runner's bookkeeping.

use hanoi::analysis::LassoWord;
use hanoi::fixtures::{arbiter_acceptance, arbiter_automaton, arbiter_game};
use hanoi::games::{parse_qbf2, Hog, Player};
use hanoi::symbolic::{parse_int_guard, IntOracle};
use hanoi::{parse_label, Acceptance, Automaton, Bounds, ColorSet, Formula, Hoa};
use hanoi_check::gen::{self, Family, HoaShape};
use hanoi_check::oracle;
use hanoi_check::suites::{default_count, run_suite, SUITES};

fn arbiter() -> Automaton {
    Automaton { hoa: arbiter_automaton(), acc: arbiter_acceptance() }
}

#[test]
fn propositional_references() {
    let f = parse_label("0 & !1").unwrap();
    assert!(oracle::eval_formula(&f, 0b01));
    assert!(!oracle::eval_formula(&f, 0b11));
    assert!(oracle::truth_table_sat(&f, 2));
    assert!(!oracle::truth_table_sat(&parse_label("0 & !0").unwrap(), 1));
    assert!(oracle::qbf_true(&parse_qbf2("forall x exists y (x <-> y)").unwrap()));
    assert!(!oracle::qbf_true(&parse_qbf2("forall x exists y (x & y)").unwrap()));
}

#[test]
fn acceptance_reference() {
    let one = ColorSet::singleton(1);
    let two = ColorSet::singleton(2);
    let both = one.union(two);
    assert!(oracle::acc_holds(&Acceptance::Buchi(one), both, both));
    assert!(!oracle::acc_holds(&Acceptance::Safety(two), both, two));
    assert!(oracle::acc_holds(&Acceptance::Muller(vec![one]), both, both));
    assert!(!oracle::acc_holds(&Acceptance::Parity { colors: 2 }, both, one));
}

#[test]
fn explicit_emptiness_and_words() {
    assert!(oracle::explicit_nonempty(&arbiter()));
    let fin_everything = Automaton { hoa: arbiter_automaton(), acc: Acceptance::CoBuchi(ColorSet::range(1, 2)) };
    assert!(!oracle::explicit_nonempty(&fin_everything));

    // bits: r is bit 0, g bit 1
    let idle = LassoWord { prefix: vec![], cycle: vec![0] };
    assert!(oracle::accepts_word(&arbiter(), &idle));
    let grant_twice = LassoWord { prefix: vec![0b10, 0b10], cycle: vec![0] };
    assert!(!oracle::accepts_word(&arbiter(), &grant_twice));

    let mut none = Hoa::with_anonymous_props(1, 2, 1);
    none.add_transition(0, Formula::False, 0, 1);
    let none = Automaton { hoa: none, acc: Acceptance::Buchi(ColorSet::singleton(1)) };
    let w = oracle::find_lasso_word(&arbiter(), &none, 2, &|a, b| a && !b).expect("the arbiter is nonempty");
    assert!(oracle::accepts_word(&arbiter(), &w) && !oracle::accepts_word(&none, &w));
    assert_eq!(oracle::find_lasso_word(&none, &arbiter(), 2, &|a, _| a), None);
}

#[test]
fn explicit_game_solver() {
    let g = arbiter_game();
    assert_eq!(oracle::solve_explicit(&oracle::hog_game(&g), &g.acc), Player::Out);
    let strict = Hog { acc: Acceptance::Safety(ColorSet::singleton(1)), ..g };
    assert_eq!(oracle::solve_explicit(&oracle::hog_game(&strict), &strict.acc), Player::In);
}

#[test]
fn integer_reference() {
    let names = vec!["x".to_string(), "y".to_string()];
    let o = IntOracle::new(5, vec!["x".into()], vec!["y".into()], &Bounds::default()).unwrap();
    let phi = parse_int_guard("x >= y", &names).unwrap();
    assert_eq!(oracle::int_exists_forall(&phi, &o), Some(vec![5]));
    let never = parse_int_guard("x < y & y < x", &names).unwrap();
    assert_eq!(oracle::int_exists_forall(&never, &o), None);
}

#[test]
fn generators_are_deterministic() {
    let shape = HoaShape { max_states: 5, max_props: 3, max_index: 3, max_out: 3 };
    for i in 0..20 {
        assert_eq!(gen::hoa(&mut gen::rng(7, i), shape), gen::hoa(&mut gen::rng(7, i), shape));
        let fam = Family::ALL[i as usize % Family::ALL.len()];
        let g = gen::hog(&mut gen::rng(7, i), fam, 4, 2, 3);
        assert_eq!(g, gen::hog(&mut gen::rng(7, i), fam, 4, 2, 3));
        assert!(g.hoa.is_deterministic() && g.hoa.is_complete());
    }
    for f in Family::ALL {
        assert_eq!(Family::from_name(f.name()), Some(f));
    }
}

#[test]
fn suite_bookkeeping() {
    assert!(run_suite("no-such-suite", 1, 1).is_none());
    for &(name, count) in SUITES {
        assert_eq!(default_count(name), Some(count));
    }
    let r = run_suite("qbf", 10, 3).unwrap();
    assert_eq!((r.total, r.passed), (10, 10));
    assert_eq!(r.summary(), "10/10 agree");
}
