//! Reduction of a game to an explicit turn-based game: at every arena state
//! In commits to a set of successors it can force (by fixing its inputs),
//! then Out picks a state from that set.

use std::collections::HashSet;

use crate::automaton::StateId;
use crate::bounds::Bounds;
use crate::formula::{exists_forall_sat, sat, Formula, Valuation};

use super::arena::GameArena;
use super::classical::{ClassicalGame, VertexLabel};
use super::{GameError, Hog, Player};
use crate::automaton::AutomatonError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PgMode {
    /// One Out vertex per distinct exact successor set.
    Exact,
    /// One Out vertex per forceable subset of the successors.
    Full,
}

/// States reachable from `q` in one step once In has fixed `v_in`.
pub fn exact_successor_set(g: &Hog, q: StateId, v_in: &Valuation) -> Vec<StateId> {
    let mut out: Vec<StateId> = g
        .hoa
        .out_transitions(q)
        .filter(|(_, t)| sat(&t.guard.restrict(&|p| v_in.get(p))).is_some())
        .map(|(_, t)| t.target)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// An input valuation keeping every successor of `q` inside `set`, if In
/// has one.
pub fn is_q_good(g: &Hog, q: StateId, set: &[StateId]) -> Option<Valuation> {
    let avoid = Formula::and(
        g.hoa
            .out_transitions(q)
            .filter(|(_, t)| !set.contains(&t.target))
            .map(|(_, t)| Formula::not(t.guard.clone())),
    );
    exists_forall_sat(&g.inputs, &g.outputs, &avoid)
}

/// Every input valuation of `s` (as bits) with its exact successor set.
pub(crate) fn exact_sets(arena: &GameArena, g: &Hog, s: usize) -> Vec<(u64, Vec<usize>)> {
    (0..1u64 << g.inputs.len())
        .map(|bits| (bits, arena.exact_set(g, s, bits)))
        .collect()
}

pub(crate) fn check_inputs(g: &Hog, bounds: &Bounds) -> Result<(), GameError> {
    if g.inputs.len() > bounds.pg_exact_inputs {
        return Err(AutomatonError::BoundExceeded {
            what: "input propositions",
            actual: g.inputs.len(),
            limit: bounds.pg_exact_inputs,
        }
        .into());
    }
    Ok(())
}

/// Builds the turn-based game over `arena`.  In vertices come first, one
/// per arena state and in the same order; Out vertices follow, colored 0.
pub fn build_pg(g: &Hog, arena: &GameArena, mode: PgMode, bounds: &Bounds) -> Result<ClassicalGame, GameError> {
    check_inputs(g, bounds)?;
    let n = arena.num_states();
    let mut game = ClassicalGame::new(g.acc.clone());
    for s in 0..n {
        game.add_vertex(Player::In, arena.color[s], VertexLabel::State(s));
    }
    game.initial = arena.initial;
    for s in 0..n {
        let exact = exact_sets(arena, g, s);
        let mut offers: Vec<(Vec<usize>, u64)> = Vec::new();
        match mode {
            PgMode::Exact => {
                let mut seen: HashSet<Vec<usize>> = HashSet::new();
                for (bits, set) in exact {
                    if seen.insert(set.clone()) {
                        offers.push((set, bits));
                    }
                }
            }
            PgMode::Full => {
                let succ = arena.successors(s);
                if succ.len() > bounds.pg_full_states {
                    return Err(AutomatonError::BoundExceeded {
                        what: "successors of a state",
                        actual: succ.len(),
                        limit: bounds.pg_full_states,
                    }
                    .into());
                }
                let masks: Vec<(u64, u64)> = exact
                    .iter()
                    .map(|(bits, set)| {
                        let m = set
                            .iter()
                            .map(|t| 1u64 << succ.binary_search(t).expect("exact set outside successors"))
                            .fold(0, |a, b| a | b);
                        (*bits, m)
                    })
                    .collect();
                for mask in 1u64..1 << succ.len() {
                    if let Some(&(bits, _)) = masks.iter().find(|(_, m)| m & !mask == 0) {
                        let set = (0..succ.len())
                            .filter(|i| mask >> i & 1 == 1)
                            .map(|i| succ[i])
                            .collect();
                        offers.push((set, bits));
                    }
                }
            }
        }
        for (set, witness) in offers {
            let v = game.add_vertex(
                Player::Out,
                0,
                VertexLabel::Offer {
                    state: s,
                    set: set.clone(),
                    witness,
                },
            );
            game.succ[v] = set;
            game.succ[s].push(v);
        }
    }
    Ok(game)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::formula::PropId;

    #[test]
    fn arbiter_exact_offers() {
        let g = fixtures::arbiter_game();
        let arena = GameArena::new(&g);
        let pg = build_pg(&g, &arena, PgMode::Exact, &Bounds::default()).unwrap();
        let offers: Vec<(usize, Vec<usize>)> = pg
            .label
            .iter()
            .filter_map(|l| match l {
                VertexLabel::Offer { state, set, .. } => Some((*state, set.clone())),
                _ => None,
            })
            .collect();
        assert_eq!(
            offers,
            vec![
                (0, vec![0, 1]),
                (0, vec![1, 2]),
                (1, vec![0, 3]),
                (1, vec![2, 3]),
                (2, vec![1, 2]),
                (3, vec![3]),
            ]
        );
        assert!(pg.owner[4..].iter().all(|&o| o == Player::Out));
        assert!(pg.color[4..].iter().all(|&c| c == 0));
    }

    #[test]
    fn goodness_matches_exact_sets() {
        let g = fixtures::arbiter_game();
        assert!(is_q_good(&g, 0, &[0, 1]).is_some());
        assert!(is_q_good(&g, 0, &[0, 2]).is_none());
        assert!(is_q_good(&g, 3, &[3]).is_some());
        let r = Valuation::from_pairs([(PropId(0), true)]);
        assert_eq!(exact_successor_set(&g, 0, &r), vec![1, 2]);
    }

    #[test]
    fn full_mode_contains_supersets() {
        let g = fixtures::arbiter_game();
        let arena = GameArena::new(&g);
        let pg = build_pg(&g, &arena, PgMode::Full, &Bounds::default()).unwrap();
        // state 0 has successors {0,1,2}: good sets are {0,1}, {1,2}, {0,1,2}
        assert_eq!(pg.succ[0].len(), 3);
    }
}
