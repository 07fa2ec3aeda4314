//! Games on deterministic complete automata whose propositions are split
//! between the environment (player In, moving first in every round) and the
//! controller (player Out).

mod arena;
mod classical;
mod direct;
mod pg;
mod qbf;
mod report;
mod strategy;

use std::fmt;

use thiserror::Error;

use crate::automaton::{Acceptance, Automaton, AutomatonError, Hoa, StateId};
use crate::formula::PropId;

pub use arena::{ArenaMove, GameArena};
pub use classical::{solve_classical, ClassicalGame, Solution, VertexLabel};
pub use direct::{cpre, solve_hog_direct, solve_reachability_hog, solve_safety_hog};
pub use pg::{build_pg, exact_successor_set, is_q_good, PgMode};
pub use qbf::{hog_from_qbf2, parse_qbf2, Qbf2, QbfError};
pub use report::{solve_hog, Engine, GameSizes, SolveOptions, WinningReport};
pub use strategy::{
    certify_in_strategy, extract_order_profile, verify_order_profile, verify_out_machine,
    InStrategy, OrderProfile, OutMachine,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    In,
    Out,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::In => Player::Out,
            Player::Out => Player::In,
        }
    }

    pub(crate) fn idx(self) -> usize {
        match self {
            Player::In => 0,
            Player::Out => 1,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::In => "environment",
            Player::Out => "controller",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("the arena has no initial state or more than one")]
    InitialState,
    #[error("the arena is not deterministic")]
    NotDeterministic,
    #[error("the arena is not complete")]
    NotComplete,
    #[error("proposition {0} is not declared")]
    PropOutOfRange(PropId),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("{0}")]
    Unsupported(String),
    #[error("malformed strategy: {0}")]
    MalformedStrategy(String),
}

/// A game: deterministic complete arena, the controllable (output)
/// propositions and the winning condition for Out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hog {
    pub hoa: Hoa,
    pub acc: Acceptance,
    /// Environment propositions, ascending.
    pub inputs: Vec<PropId>,
    /// Controller propositions, ascending.
    pub outputs: Vec<PropId>,
}

impl Hog {
    /// Checks determinism and completeness; every proposition not listed in
    /// `outputs` is an input.
    pub fn new(hoa: Hoa, acc: Acceptance, outputs: Vec<PropId>) -> Result<Hog, GameError> {
        let mut outputs = outputs;
        outputs.sort_unstable();
        outputs.dedup();
        if let Some(&p) = outputs.iter().find(|p| p.index() >= hoa.num_props()) {
            return Err(GameError::PropOutOfRange(p));
        }
        hoa.validate()?;
        if hoa.initial.len() != 1 {
            return Err(GameError::InitialState);
        }
        if !hoa.is_deterministic() {
            return Err(GameError::NotDeterministic);
        }
        if !hoa.is_complete() {
            return Err(GameError::NotComplete);
        }
        let inputs = hoa.prop_ids().into_iter().filter(|p| !outputs.contains(p)).collect();
        Ok(Hog {
            hoa,
            acc,
            inputs,
            outputs,
        })
    }

    pub fn initial(&self) -> StateId {
        self.hoa.initial[0]
    }

    pub fn automaton(&self) -> Automaton {
        Automaton {
            hoa: self.hoa.clone(),
            acc: self.acc.clone(),
        }
    }
}
