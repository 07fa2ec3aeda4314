//! Worked game examples through the public API.

use hanoi::fixtures::{arbiter_automaton, arbiter_game};
use hanoi::games::{
    certify_in_strategy, cpre, exact_successor_set, extract_order_profile, hog_from_qbf2, is_q_good, parse_qbf2,
    solve_hog, solve_hog_direct, verify_order_profile, verify_out_machine, Engine, GameArena, Hog, InStrategy,
    OrderProfile, Player, SolveOptions,
};
use hanoi::symbolic::{fgame_from_hog, solve_fgame, IntOracle, TheoryOracle};
use hanoi::{Acceptance, Bounds, ColorSet, Formula, Hoa, PropId, Valuation};

fn r(v: bool) -> Valuation {
    Valuation::from_pairs([(PropId(0), v)])
}

fn with_strategies(engine: Engine) -> SolveOptions {
    SolveOptions { engine, strategies: true, ..SolveOptions::default() }
}

fn one_state(acc: Acceptance) -> Hog {
    let mut h = Hoa::with_anonymous_props(1, 2, 1);
    h.add_transition(0, Formula::True, 0, 1);
    Hog::new(h, acc, vec![PropId(1)]).unwrap()
}

#[test]
fn good_sets_of_the_arbiter() {
    let g = arbiter_game();
    let w = is_q_good(&g, 0, &[0, 1]).expect("{q1,q2} is q1-good");
    assert_eq!(w.get(PropId(0)), Some(false));
    let w = is_q_good(&g, 0, &[1, 2]).expect("{q2,q3} is q1-good");
    assert_eq!(w.get(PropId(0)), Some(true));
    assert!(is_q_good(&g, 2, &[0, 1, 2, 3]).is_some());
    assert_eq!(exact_successor_set(&g, 0, &r(false)), vec![0, 1]);
    assert_eq!(exact_successor_set(&g, 0, &r(true)), vec![1, 2]);
}

#[test]
fn arbiter_is_won_by_the_controller() {
    let g = arbiter_game();
    for engine in [Engine::PgExact, Engine::PgFull, Engine::Direct] {
        let rep = solve_hog(&g, &with_strategies(engine)).unwrap();
        assert_eq!(rep.winner, Player::Out, "{engine:?}");
        let m = rep.out_strategy.expect("a strategy for the winner");
        assert!(verify_out_machine(&g, &m, &Bounds::default()).unwrap());
        // g = false at q2 and g = true at q3, whatever r is
        for (&(s, _, _), &out) in &m.action {
            match rep.arena.origin[s] {
                1 => assert_eq!(out, 0),
                2 => assert_eq!(out, 1),
                _ => {}
            }
        }
    }
    assert_eq!(solve_hog_direct(&g).unwrap(), Player::Out);
    let muller = Hog { acc: Acceptance::Muller(vec![[1].into_iter().collect()]), ..g.clone() };
    assert_eq!(solve_hog_direct(&muller).unwrap(), Player::Out);
    assert_eq!(solve_hog(&muller, &SolveOptions::default()).unwrap().winner, Player::Out);
}

#[test]
fn arbiter_order_profile() {
    let g = arbiter_game();
    let p = extract_order_profile(&g, &Bounds::default()).unwrap();
    assert!(verify_order_profile(&g, &p, &Bounds::default()).unwrap());
}

#[test]
fn controllable_predecessors() {
    let g = arbiter_game();
    let all = vec![true; 4];
    assert_eq!(cpre(&g, &all, Player::Out), all);
    assert_eq!(cpre(&g, &all, Player::In), all);
    assert_eq!(cpre(&g, &[false; 4], Player::Out), vec![false; 4]);
    // In can force q4 only from q4: at q2 the controller answers g = false
    let q4 = [false, false, false, true];
    assert_eq!(cpre(&g, &q4, Player::In), vec![false, false, false, true]);
}

#[test]
fn trivial_games() {
    let g = one_state(Acceptance::Buchi(ColorSet::singleton(1)));
    assert_eq!(solve_hog(&g, &SolveOptions::default()).unwrap().winner, Player::Out);
    let p = OrderProfile { order: vec![vec![0]] };
    assert!(verify_order_profile(&g, &p, &Bounds::default()).unwrap());
    let muller = one_state(Acceptance::Muller(vec![ColorSet::singleton(1)]));
    assert_eq!(solve_hog_direct(&muller).unwrap(), Player::Out);
    // every color safe: nothing to lose; only color 1: r at q2 forces color 2
    let safe = Hog { acc: Acceptance::Safety(ColorSet::range(1, 2)), ..arbiter_game() };
    assert_eq!(solve_hog(&safe, &SolveOptions::default()).unwrap().winner, Player::Out);
    let strict = Hog { acc: Acceptance::Safety(ColorSet::singleton(1)), ..arbiter_game() };
    assert_eq!(solve_hog(&strict, &SolveOptions::default()).unwrap().winner, Player::In);
}

#[test]
fn qbf_games() {
    let copy = parse_qbf2("forall x exists y (x <-> y)").unwrap();
    let (reach, safe) = hog_from_qbf2(&copy);
    assert_eq!(solve_hog(&reach, &SolveOptions::default()).unwrap().winner, Player::Out);
    assert_eq!(solve_hog(&safe, &SolveOptions::default()).unwrap().winner, Player::Out);

    let and = parse_qbf2("forall x exists y (x & y)").unwrap();
    let (reach, safe) = hog_from_qbf2(&and);
    for g in [&reach, &safe] {
        let rep = solve_hog(g, &with_strategies(Engine::PgExact)).unwrap();
        assert_eq!(rep.winner, Player::In);
        let s = rep.in_strategy.expect("In wins memorylessly");
        assert!(certify_in_strategy(g, &s).unwrap());
        let (v, _) = &s.choice[&0];
        assert_eq!(v.get(PropId(0)), Some(false));
    }
}

#[test]
fn strategies_against_the_winner_do_not_certify() {
    let g = arbiter_game();
    let arena = GameArena::new(&g);
    let mut choice = std::collections::BTreeMap::new();
    for s in 0..arena.num_states() {
        let v = r(s % 2 == 0);
        let set = exact_successor_set(&g, arena.origin[s], &v);
        let set = set.iter().map(|&q| (0..arena.num_states()).find(|&t| arena.origin[t] == q).unwrap()).collect();
        choice.insert(s, (v, set));
    }
    assert!(!certify_in_strategy(&g, &InStrategy { choice }).unwrap());
}

#[test]
fn boolean_oracle_reproduces_the_verdict() {
    let g = arbiter_game();
    let (f, o) = fgame_from_hog(&g);
    assert_eq!(solve_fgame(&f, &o, &Bounds::default()).unwrap().winner, Player::Out);
    let a = arbiter_automaton();
    assert_eq!(f.num_states, a.num_states());
}

#[test]
fn integer_maximum_witness() {
    let names = vec!["x".to_string(), "y".to_string()];
    for b in 0..=8 {
        let o = IntOracle::new(b, vec!["x".into()], vec!["y".into()], &Bounds::default()).unwrap();
        let phi = hanoi::symbolic::parse_int_guard("x >= y", &names).unwrap();
        assert_eq!(o.exists_forall(&phi).unwrap(), Some(vec![b]));
        let lt = hanoi::symbolic::parse_int_guard("x < y", &names).unwrap();
        // only x = B falsifies x < y for every y
        assert_eq!(o.exists_forall_avoid(&[&lt]).unwrap(), Some(vec![b]));
    }
}
