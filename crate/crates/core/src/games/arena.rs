//! State-colored view of a game.
//!
//! Solvers work with colors on states.  A game whose coloring is already
//! state-based is used as is; otherwise every state is paired with the color
//! of the transition that entered it, so that the sequence of state colors
//! is the sequence of transition colors delayed by one step (the initial
//! pair carries the neutral color 0).

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::automaton::{ColorId, StateId};
use crate::formula::{sat, Formula};

use super::Hog;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArenaMove {
    pub guard: Formula,
    pub target: usize,
    /// Index of the game transition this move comes from.
    pub transition: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameArena {
    /// Game state of every arena state.
    pub origin: Vec<StateId>,
    /// Color of every arena state; 0 is neutral.
    pub color: Vec<ColorId>,
    pub moves: Vec<Vec<ArenaMove>>,
    pub initial: usize,
    /// True when states were paired with entry colors.
    pub delayed: bool,
}

impl GameArena {
    pub fn new(g: &Hog) -> GameArena {
        let hoa = &g.hoa;
        if let Some(coloring) = hoa.state_coloring() {
            let n = hoa.num_states();
            let mut moves = vec![Vec::new(); n];
            for (i, t) in hoa.transitions.iter().enumerate() {
                moves[t.source].push(ArenaMove {
                    guard: t.guard.clone(),
                    target: t.target,
                    transition: i,
                });
            }
            return GameArena {
                origin: (0..n).collect(),
                color: coloring.into_iter().map(|c| c.unwrap_or(0)).collect(),
                moves,
                initial: g.initial(),
                delayed: false,
            };
        }
        let outgoing = hoa.outgoing();
        let mut ids: HashMap<(StateId, ColorId), usize> = HashMap::new();
        let mut origin = Vec::new();
        let mut color = Vec::new();
        let mut moves: Vec<Vec<ArenaMove>> = Vec::new();
        let mut queue = VecDeque::new();
        let start = (g.initial(), 0);
        ids.insert(start, 0);
        origin.push(start.0);
        color.push(0);
        moves.push(Vec::new());
        queue.push_back(start);
        while let Some((q, c)) = queue.pop_front() {
            let id = ids[&(q, c)];
            for &i in &outgoing[q] {
                let t = &hoa.transitions[i];
                let key = (t.target, t.color);
                let target = *ids.entry(key).or_insert_with(|| {
                    origin.push(key.0);
                    color.push(key.1);
                    moves.push(Vec::new());
                    queue.push_back(key);
                    origin.len() - 1
                });
                moves[id].push(ArenaMove {
                    guard: t.guard.clone(),
                    target,
                    transition: i,
                });
            }
        }
        GameArena {
            origin,
            color,
            moves,
            initial: 0,
            delayed: true,
        }
    }

    pub fn num_states(&self) -> usize {
        self.origin.len()
    }

    /// Syntactic successors, ascending.
    pub fn successors(&self, s: usize) -> Vec<usize> {
        self.moves[s]
            .iter()
            .map(|m| m.target)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Targets of the moves whose guard is satisfiable once the inputs are
    /// fixed to `v_in` (bit `i` for `g.inputs[i]`), ascending.
    pub fn exact_set(&self, g: &Hog, s: usize, v_in: u64) -> Vec<usize> {
        let mut out: Vec<usize> = self.moves[s]
            .iter()
            .filter(|m| {
                let f = m.guard.restrict_bits(&g.inputs, v_in);
                match f {
                    Formula::True => true,
                    Formula::False => false,
                    f => sat(&f).is_some(),
                }
            })
            .map(|m| m.target)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// An output valuation (bits over `g.outputs`) leading from `s` to
    /// `target` under inputs `v_in`, if one exists.
    pub fn output_towards(&self, g: &Hog, s: usize, v_in: u64, target: usize) -> Option<u64> {
        self.moves[s]
            .iter()
            .filter(|m| m.target == target)
            .find_map(|m| sat(&m.guard.restrict_bits(&g.inputs, v_in)))
            .map(|v| v.bits_over(&g.outputs))
    }

    /// The successor reached from `s` on the joint valuation.
    pub fn step(&self, g: &Hog, s: usize, v_in: u64, v_out: u64) -> Option<usize> {
        self.moves[s]
            .iter()
            .find(|m| {
                m.guard
                    .restrict_bits(&g.inputs, v_in)
                    .restrict_bits(&g.outputs, v_out)
                    == Formula::True
            })
            .map(|m| m.target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{Acceptance, ColorSet, Hoa};
    use crate::fixtures;
    use crate::formula::PropId;

    #[test]
    fn state_based_game_is_used_directly() {
        let g = fixtures::arbiter_game();
        let a = GameArena::new(&g);
        assert!(!a.delayed);
        assert_eq!(a.color, vec![1, 1, 2, 2]);
        assert_eq!(a.exact_set(&g, 0, 0), vec![0, 1]);
        assert_eq!(a.exact_set(&g, 0, 1), vec![1, 2]);
        assert_eq!(a.output_towards(&g, 1, 0, 0), Some(0));
        assert_eq!(a.step(&g, 2, 0, 1), Some(1));
    }

    #[test]
    fn transition_based_game_is_delayed() {
        // one state, output chooses color 1 or 2
        let mut h = Hoa::with_anonymous_props(1, 1, 2);
        h.add_transition(0, Formula::atom(0), 0, 1);
        h.add_transition(0, Formula::not(Formula::atom(0)), 0, 2);
        let g = Hog::new(h, Acceptance::Buchi(ColorSet::singleton(1)), vec![PropId(0)]).unwrap();
        let a = GameArena::new(&g);
        assert!(a.delayed);
        assert_eq!(a.num_states(), 3);
        assert_eq!(a.color, vec![0, 1, 2]);
        assert_eq!(a.successors(0), vec![1, 2]);
    }
}
