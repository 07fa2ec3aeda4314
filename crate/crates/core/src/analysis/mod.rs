//! Emptiness with lasso witnesses, witness shrinking and language inclusion.

mod emptiness;
mod inclusion;
mod lasso;

use thiserror::Error;

use crate::automaton::AutomatonError;
use crate::transforms::TransformError;

pub use emptiness::{check_lasso_bound, is_empty, BoundReport, Verdict};
pub use inclusion::{included, word_run, Inclusion, LassoWord};
pub use lasso::{shrink_lasso, Lasso, LassoError, LassoStep};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("the language is empty")]
    Empty,
    #[error("the automata have different propositions")]
    PropositionMismatch,
    #[error("invalid lasso: {0}")]
    Lasso(#[from] LassoError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("internal error: {0}")]
    Internal(&'static str),
}
