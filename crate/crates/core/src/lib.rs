//! Hanoi omega-automata and games.
//!
//! Automata carry Boolean guards over atomic propositions and one color per
//! transition; acceptance is an Emerson-Lei formula over colors or one of the
//! classical named families.  The crate covers emptiness with lasso
//! witnesses, acceptance transformations, desk-scale language inclusion and
//! solving of games whose arenas are such automata (with the propositions
//! split between an environment and a controller), including games over
//! richer guard theories through a pluggable oracle.

pub mod analysis;
pub mod automaton;
pub mod bounds;
pub mod fixtures;
pub mod formula;
pub mod games;
pub(crate) mod graph;
pub mod hoa_io;
pub mod symbolic;
pub mod transforms;

pub use automaton::{
    AccFormula, Acceptance, Automaton, ColorId, ColorSet, ColorTrace, Conjunct, Hoa, StateId,
    Transition,
};
pub use bounds::Bounds;
pub use formula::{exists_forall_sat, parse_label, print_label, sat, Formula, PropId, Valuation};
pub use games::Hog;
