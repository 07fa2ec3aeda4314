//! Solving games directly on the arena, without building the explicit
//! reduction: attractors are computed with controllable predecessors, which
//! quantify over input and output valuations symbolically.
//!
//! The recursion works on sub-arenas `(U, F)`: `U` are the live states, `F`
//! the states already won by Out (moving there is good for Out) and the
//! rest `R` the states already won by In.

use crate::automaton::{Acceptance, ColorSet};
use crate::formula::{exists_forall_sat, Formula};

use super::arena::GameArena;
use super::classical::color_targets;
use super::{GameError, Hog, Player};

/// Controllable predecessor over the game states: the states from which
/// `player` can force the next state into `target`.
///
/// * Out: for every input there is an output reaching `target`.
/// * In: some input makes every output reach `target`.
pub fn cpre(g: &Hog, target: &[bool], player: Player) -> Vec<bool> {
    (0..g.hoa.num_states())
        .map(|q| {
            let moves: Vec<(&Formula, bool)> = g
                .hoa
                .out_transitions(q)
                .map(|(_, t)| (&t.guard, target[t.target]))
                .collect();
            match player {
                Player::Out => out_can_force(g, &moves),
                Player::In => in_can_force(g, &moves),
            }
        })
        .collect()
}

/// `∀ in ∃ out` some move flagged `true` is taken.
fn out_can_force(g: &Hog, moves: &[(&Formula, bool)]) -> bool {
    let blocked = Formula::and(moves.iter().filter(|m| m.1).map(|m| Formula::not(m.0.clone())));
    exists_forall_sat(&g.inputs, &g.outputs, &blocked).is_none()
}

/// `∃ in ∀ out` only moves flagged `true` are taken.
fn in_can_force(g: &Hog, moves: &[(&Formula, bool)]) -> bool {
    let avoid = Formula::and(moves.iter().filter(|m| !m.1).map(|m| Formula::not(m.0.clone())));
    exists_forall_sat(&g.inputs, &g.outputs, &avoid).is_some()
}

struct Direct<'a> {
    g: &'a Hog,
    arena: &'a GameArena,
}

type Regions = [Vec<bool>; 2];

impl Direct<'_> {
    fn n(&self) -> usize {
        self.arena.num_states()
    }

    /// Whether `player` can force the successor of `s` into `x`, within the
    /// sub-arena `(u, f)`.
    fn can_force(&self, s: usize, player: Player, x: &[bool], u: &[bool], f: &[bool]) -> bool {
        let moves: Vec<(&Formula, bool)> = self.arena.moves[s]
            .iter()
            .map(|m| {
                let t = m.target;
                let good = match player {
                    Player::Out => f[t] || x[t],
                    Player::In => x[t] || (!u[t] && !f[t]),
                };
                (&m.guard, good)
            })
            .collect();
        match player {
            Player::Out => out_can_force(self.g, &moves),
            Player::In => in_can_force(self.g, &moves),
        }
    }

    fn attractor(&self, player: Player, u: &[bool], f: &[bool], target: &[bool]) -> Vec<bool> {
        let n = self.n();
        let mut x: Vec<bool> = (0..n).map(|s| u[s] && target[s]).collect();
        loop {
            let mut changed = false;
            for s in 0..n {
                if u[s] && !x[s] && self.can_force(s, player, &x, u, f) {
                    x[s] = true;
                    changed = true;
                }
            }
            if !changed {
                return x;
            }
        }
    }

    /// Removes `a` (attracted by `player`) from the sub-arena.
    fn remove(&self, player: Player, u: &[bool], f: &[bool], a: &[bool]) -> (Vec<bool>, Vec<bool>) {
        let n = self.n();
        let u2 = (0..n).map(|s| u[s] && !a[s]).collect();
        let f2 = (0..n)
            .map(|s| f[s] || (player == Player::Out && a[s]))
            .collect();
        (u2, f2)
    }

    fn solve(&self, u: &[bool], f: &[bool]) -> Regions {
        let n = self.n();
        let empty = vec![false; n];
        if !u.iter().any(|&b| b) {
            return [empty.clone(), empty];
        }
        let colors: ColorSet = (0..n)
            .filter(|&s| u[s] && self.arena.color[s] != 0)
            .map(|s| self.arena.color[s])
            .collect();
        let acc = &self.g.acc;
        let mut winner = |s: ColorSet| if acc.eval_inf(s) { Player::Out } else { Player::In };
        let fav = winner(colors);
        let opp = fav.opponent();
        for t in color_targets(colors, fav, &mut winner) {
            let target: Vec<bool> = (0..n).map(|s| u[s] && t.contains(self.arena.color[s])).collect();
            let a = self.attractor(fav, u, f, &target);
            let (u1, f1) = self.remove(fav, u, f, &a);
            let w = self.solve(&u1, &f1);
            if w[opp.idx()].iter().any(|&b| b) {
                let b = self.attractor(opp, u, f, &w[opp.idx()]);
                let (u2, f2) = self.remove(opp, u, f, &b);
                let mut w2 = self.solve(&u2, &f2);
                for s in 0..n {
                    if b[s] {
                        w2[opp.idx()][s] = true;
                    }
                }
                return w2;
            }
        }
        let mut out = [empty.clone(), empty];
        out[fav.idx()] = u.to_vec();
        out
    }
}

fn region_winner(arena: &GameArena, out_region: &[bool]) -> Player {
    if out_region[arena.initial] {
        Player::Out
    } else {
        Player::In
    }
}

/// Out's winning region of the arena under reachability of `r`.
fn reach_region(d: &Direct, r: ColorSet) -> Vec<bool> {
    let n = d.n();
    let all = vec![true; n];
    let target: Vec<bool> = (0..n).map(|s| d.arena.color[s] != 0 && r.contains(d.arena.color[s])).collect();
    d.attractor(Player::Out, &all, &vec![false; n], &target)
}

/// In's winning region of the arena under safety of `s`.
fn unsafe_region(d: &Direct, safe: ColorSet) -> Vec<bool> {
    let n = d.n();
    let all = vec![true; n];
    let bad: Vec<bool> = (0..n)
        .map(|s| d.arena.color[s] != 0 && !safe.contains(d.arena.color[s]))
        .collect();
    // R must stay empty for In's attractor: the whole arena is live
    d.attractor(Player::In, &all, &vec![false; n], &bad)
}

/// Winner of a game with a reachability condition.
pub fn solve_reachability_hog(g: &Hog) -> Result<Player, GameError> {
    let Acceptance::Reachability(r) = &g.acc else {
        return Err(GameError::Unsupported("not a reachability game".into()));
    };
    let arena = GameArena::new(g);
    let d = Direct { g, arena: &arena };
    Ok(region_winner(&arena, &reach_region(&d, *r)))
}

/// Winner of a game with a safety condition.
pub fn solve_safety_hog(g: &Hog) -> Result<Player, GameError> {
    let Acceptance::Safety(s) = &g.acc else {
        return Err(GameError::Unsupported("not a safety game".into()));
    };
    let arena = GameArena::new(g);
    let d = Direct { g, arena: &arena };
    let lost = unsafe_region(&d, *s);
    Ok(if lost[arena.initial] { Player::In } else { Player::Out })
}

/// Winner of the game, computed on the arena.
pub fn solve_hog_direct(g: &Hog) -> Result<Player, GameError> {
    match &g.acc {
        Acceptance::Reachability(_) => solve_reachability_hog(g),
        Acceptance::Safety(_) => solve_safety_hog(g),
        acc => {
            if acc.colors().len() > 16 {
                return Err(GameError::Unsupported(
                    "too many colors for the color-set recursion".into(),
                ));
            }
            let arena = GameArena::new(g);
            let d = Direct { g, arena: &arena };
            let n = arena.num_states();
            let w = d.solve(&vec![true; n], &vec![false; n]);
            Ok(region_winner(&arena, &w[Player::Out.idx()]))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{AccFormula, Hoa};
    use crate::fixtures;
    use crate::formula::PropId;

    #[test]
    fn arbiter_is_won_by_out() {
        let g = fixtures::arbiter_game();
        assert_eq!(solve_hog_direct(&g).unwrap(), Player::Out);
        let mut h = g.clone();
        h.acc = Acceptance::El(AccFormula::Fin(ColorSet::singleton(1)));
        assert_eq!(solve_hog_direct(&h).unwrap(), Player::Out);
        h.acc = Acceptance::El(AccFormula::Fin(ColorSet::singleton(2)));
        assert_eq!(solve_hog_direct(&h).unwrap(), Player::In);
    }

    #[test]
    fn cpre_on_arbiter() {
        let g = fixtures::arbiter_game();
        // Out can always reach q2 from q1 and q3 by granting
        let target = [false, true, false, false];
        assert_eq!(cpre(&g, &target, Player::Out), vec![true, false, true, false]);
        // In can force q3 from q1 by requesting? no: Out may grant
        let target = [false, false, true, false];
        assert_eq!(cpre(&g, &target, Player::In), vec![false, false, false, false]);
        assert_eq!(cpre(&g, &[false, false, false, true], Player::In), vec![false, false, false, true]);
    }

    #[test]
    fn reachability_and_safety() {
        // input x decides between colors 1 and 2 forever
        let mut h = Hoa::with_anonymous_props(3, 2, 2);
        h.add_transition(0, Formula::atom(0), 1, 1);
        h.add_transition(0, Formula::not(Formula::atom(0)), 2, 1);
        h.add_transition(1, Formula::True, 1, 1);
        h.add_transition(2, Formula::True, 2, 2);
        let mk = |acc| Hog::new(h.clone(), acc, vec![PropId(1)]).unwrap();
        assert_eq!(
            solve_hog_direct(&mk(Acceptance::Reachability(ColorSet::singleton(2)))).unwrap(),
            Player::In
        );
        assert_eq!(
            solve_hog_direct(&mk(Acceptance::Safety(ColorSet::singleton(1)))).unwrap(),
            Player::In
        );
        assert_eq!(
            solve_hog_direct(&mk(Acceptance::Safety(ColorSet::range(1, 2)))).unwrap(),
            Player::Out
        );
    }
}
