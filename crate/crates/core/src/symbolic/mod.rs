//! Games over guard theories.  Guards are opaque to the solver; every
//! question about them goes to a [`TheoryOracle`], which only has to decide
//! the two quantifier shapes the game reduction needs.

mod boolean;
mod int;

use std::collections::{HashMap, VecDeque};
use std::fmt::Debug;

use thiserror::Error;

use crate::automaton::{Acceptance, AutomatonError, ColorId};
use crate::bounds::Bounds;
use crate::games::{solve_classical, ClassicalGame, Player, VertexLabel};

pub use boolean::{fgame_from_hog, BooleanOracle};
pub use int::{parse_int_game, parse_int_guard, print_int_game, Cmp, IntGuard, IntOracle, LinAtom};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("malformed atom: {0}")]
    MalformedAtom(String),
    #[error("the oracle cannot decide this query: {0}")]
    Undecidable(String),
    #[error(transparent)]
    Bound(#[from] AutomatonError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Bound(#[from] AutomatonError),
    #[error("state {0} has overlapping guards")]
    NotDeterministic(usize),
    #[error("the guards of state {0} do not cover every input and output")]
    NotComplete(usize),
    #[error("state {0} does not exist")]
    StateOutOfRange(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Decision procedure for a guard language over the variables `x_in`
/// (chosen first, by the environment) and `x_out`.
pub trait TheoryOracle {
    type Guard: Clone + Debug;
    /// An assignment of the input variables.
    type Witness: Clone + Debug + PartialEq;

    /// `∃x_in ∀x_out ⋀ ¬avoid`, with a witness for `x_in`.
    fn exists_forall_avoid(&self, avoid: &[&Self::Guard]) -> Result<Option<Self::Witness>, OracleError>;

    /// `∀x_in ∃x_out ⋁ reach`.
    fn forall_exists_reach(&self, reach: &[&Self::Guard]) -> Result<bool, OracleError>;

    /// `∃x_in ∃x_out ⋀ guards`.
    fn satisfiable(&self, guards: &[&Self::Guard]) -> Result<bool, OracleError>;

    /// `∀x_in ∀x_out ⋁ guards`.
    fn valid_disjunction(&self, guards: &[&Self::Guard]) -> Result<bool, OracleError>;

    /// Whether fixing the inputs to `w` makes every guard of `avoid` false
    /// for all outputs.
    fn check_witness(&self, w: &Self::Witness, avoid: &[&Self::Guard]) -> Result<bool, OracleError>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FTransition<G> {
    pub source: usize,
    pub guard: G,
    pub target: usize,
    pub color: ColorId,
}

/// A game whose arena has guards from an oracle's language; it must be
/// deterministic and complete relative to the oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FGame<G> {
    pub num_states: usize,
    pub initial: usize,
    pub transitions: Vec<FTransition<G>>,
    /// Number of colors.
    pub index: u32,
    pub acc: Acceptance,
}

impl<G> FGame<G> {
    pub fn out_transitions(&self, q: usize) -> impl Iterator<Item = &FTransition<G>> {
        self.transitions.iter().filter(move |t| t.source == q)
    }
}

/// Checks determinism and completeness through the oracle.
pub fn validate_fgame<O: TheoryOracle>(g: &FGame<O::Guard>, o: &O) -> Result<(), SymbolicError> {
    if g.initial >= g.num_states {
        return Err(SymbolicError::StateOutOfRange(g.initial));
    }
    for t in &g.transitions {
        for s in [t.source, t.target] {
            if s >= g.num_states {
                return Err(SymbolicError::StateOutOfRange(s));
            }
        }
    }
    for q in 0..g.num_states {
        let guards: Vec<&O::Guard> = g.out_transitions(q).map(|t| &t.guard).collect();
        for i in 0..guards.len() {
            for j in i + 1..guards.len() {
                if o.satisfiable(&[guards[i], guards[j]])? {
                    return Err(SymbolicError::NotDeterministic(q));
                }
            }
        }
        if !o.valid_disjunction(&guards)? {
            return Err(SymbolicError::NotComplete(q));
        }
    }
    Ok(())
}

/// Arena with the color of the last transition moved into the state:
/// `(q, c)`, starting from `(initial, 0)`.
struct DelayedArena {
    states: Vec<(usize, ColorId)>,
    /// `(transition, target arena state)` per arena state.
    moves: Vec<Vec<(usize, usize)>>,
}

impl DelayedArena {
    fn new<G>(g: &FGame<G>) -> DelayedArena {
        let mut ids: HashMap<(usize, ColorId), usize> = HashMap::new();
        let mut states = vec![(g.initial, 0)];
        ids.insert((g.initial, 0), 0);
        let mut moves = Vec::new();
        let mut queue = VecDeque::from([0]);
        while let Some(s) = queue.pop_front() {
            let (q, _) = states[s];
            let mut out = Vec::new();
            for (i, t) in g.transitions.iter().enumerate().filter(|(_, t)| t.source == q) {
                let key = (t.target, t.color);
                let id = *ids.entry(key).or_insert_with(|| {
                    states.push(key);
                    queue.push_back(states.len() - 1);
                    states.len() - 1
                });
                out.push((i, id));
            }
            if moves.len() <= s {
                moves.resize(s + 1, Vec::new());
            }
            moves[s] = out;
        }
        moves.resize(states.len(), Vec::new());
        DelayedArena { states, moves }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FReport<W> {
    pub winner: Player,
    pub arena_states: usize,
    pub pg_vertices: usize,
    pub pg_edges: usize,
    /// For every arena state `(q, c)` won by In, an input assignment
    /// forcing the successor into In's region, when In wins from it.
    pub in_choices: Vec<((usize, ColorId), W)>,
}

/// Solves the game by building the full turn-based reduction: at every
/// arena state, each subset of successors is offered to Out iff the oracle
/// finds an input assignment forcing the next state into it.
pub fn solve_fgame<O: TheoryOracle>(
    g: &FGame<O::Guard>,
    o: &O,
    bounds: &Bounds,
) -> Result<FReport<O::Witness>, SymbolicError> {
    validate_fgame(g, o)?;
    let arena = DelayedArena::new(g);
    let n = arena.states.len();
    let mut game = ClassicalGame::new(g.acc.clone());
    for &(_, c) in &arena.states {
        game.add_vertex(Player::In, c, VertexLabel::Plain);
    }
    game.initial = 0;
    let mut witnesses: Vec<Vec<O::Witness>> = vec![Vec::new(); n];
    for s in 0..n {
        let mut succ: Vec<usize> = arena.moves[s].iter().map(|m| m.1).collect();
        succ.sort_unstable();
        succ.dedup();
        if succ.len() > bounds.pg_full_states {
            return Err(AutomatonError::BoundExceeded {
                what: "successors of a state",
                actual: succ.len(),
                limit: bounds.pg_full_states,
            }
            .into());
        }
        for mask in 1u64..1 << succ.len() {
            let inside = |t: usize| mask >> succ.binary_search(&t).unwrap() & 1 == 1;
            let avoid: Vec<&O::Guard> = arena.moves[s]
                .iter()
                .filter(|m| !inside(m.1))
                .map(|m| &g.transitions[m.0].guard)
                .collect();
            let Some(w) = o.exists_forall_avoid(&avoid)? else {
                continue;
            };
            if !o.check_witness(&w, &avoid)? {
                return Err(OracleError::Undecidable("the oracle returned an invalid witness".into()).into());
            }
            let set: Vec<usize> = succ.iter().copied().filter(|&t| inside(t)).collect();
            let v = game.add_vertex(Player::Out, 0, VertexLabel::Plain);
            game.succ[v] = set;
            game.succ[s].push(v);
            witnesses[s].push(w);
        }
    }
    let sol = solve_classical(&game);
    let mut in_choices = Vec::new();
    for s in 0..n {
        if sol.winner[s] != Player::In {
            continue;
        }
        if let Some(v) = sol.strategy[s] {
            let k = game.succ[s].iter().position(|&x| x == v).expect("strategy follows an edge");
            in_choices.push((arena.states[s], witnesses[s][k].clone()));
        }
    }
    Ok(FReport {
        winner: sol.winner[0],
        arena_states: n,
        pg_vertices: game.num_vertices(),
        pg_edges: game.num_edges(),
        in_choices,
    })
}

/// Controllable predecessor on the states of `g` (not the delayed arena):
/// Out forces the next state into `target` when `∀x_in ∃x_out` some guard
/// towards `target` holds; In when `∃x_in ∀x_out` no guard leaving it holds.
pub fn fcpre<O: TheoryOracle>(
    g: &FGame<O::Guard>,
    o: &O,
    target: &[bool],
    player: Player,
) -> Result<Vec<bool>, OracleError> {
    (0..g.num_states)
        .map(|q| {
            let (good, bad): (Vec<_>, Vec<_>) = g.out_transitions(q).partition(|t| target[t.target]);
            match player {
                Player::Out => o.forall_exists_reach(&good.iter().map(|t| &t.guard).collect::<Vec<_>>()),
                Player::In => Ok(o
                    .exists_forall_avoid(&bad.iter().map(|t| &t.guard).collect::<Vec<_>>())?
                    .is_some()),
            }
        })
        .collect()
}
