//! The HOA data model: guarded, colored transitions plus acceptance
//! conditions over colors.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::formula::{sat, Formula, PropId, Valuation};

pub type StateId = usize;

/// Colors are `1..=d` on automaton transitions; `0` is reserved for the
/// neutral vertices of classical games.
pub type ColorId = u32;

/// Largest color a [`ColorSet`] can hold.
pub const MAX_COLOR: ColorId = 127;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("color {color} is outside 1..={index}")]
    ColorOutOfRange { color: ColorId, index: u32 },
    #[error("state {0} does not exist")]
    StateOutOfRange(StateId),
    #[error("proposition {0} is not declared")]
    PropOutOfRange(PropId),
    #[error("{what} is {actual}, above the configured limit of {limit}")]
    BoundExceeded {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
}

/// Small set of colors (at most [`MAX_COLOR`]) stored as a bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorSet(u128);

impl ColorSet {
    pub const fn empty() -> ColorSet {
        ColorSet(0)
    }

    pub fn singleton(c: ColorId) -> ColorSet {
        let mut s = ColorSet::empty();
        s.insert(c);
        s
    }

    /// The colors `lo..=hi`.
    pub fn range(lo: ColorId, hi: ColorId) -> ColorSet {
        (lo..=hi).collect()
    }

    pub fn from_bits(bits: u128) -> ColorSet {
        ColorSet(bits)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn insert(&mut self, c: ColorId) {
        assert!(c <= MAX_COLOR, "color {c} exceeds the supported maximum {MAX_COLOR}");
        self.0 |= 1 << c;
    }

    pub fn remove(&mut self, c: ColorId) {
        if c <= MAX_COLOR {
            self.0 &= !(1 << c);
        }
    }

    pub fn contains(self, c: ColorId) -> bool {
        c <= MAX_COLOR && self.0 >> c & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 & other.0)
    }

    pub fn difference(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 & !other.0)
    }

    pub fn intersects(self, other: ColorSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_subset(self, other: ColorSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn max(self) -> Option<ColorId> {
        (self.0 != 0).then(|| 127 - self.0.leading_zeros())
    }

    pub fn min(self) -> Option<ColorId> {
        (self.0 != 0).then(|| self.0.trailing_zeros())
    }

    /// Colors in ascending order.
    pub fn iter(self) -> impl Iterator<Item = ColorId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let c = bits.trailing_zeros();
                bits &= bits - 1;
                Some(c)
            }
        })
    }

    /// All subsets, in increasing order of their bit masks.
    pub fn subsets(self) -> impl Iterator<Item = ColorSet> {
        let full = self.0;
        let mut next = Some(0u128);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(ColorSet(cur))
        })
    }
}

impl FromIterator<ColorId> for ColorSet {
    fn from_iter<I: IntoIterator<Item = ColorId>>(iter: I) -> ColorSet {
        let mut s = ColorSet::empty();
        for c in iter {
            s.insert(c);
        }
        s
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

/// Colors seen along a lasso-shaped run: every color, and those on the
/// cycle (which repeat forever).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ColorTrace {
    pub elem: ColorSet,
    pub occ_inf: ColorSet,
}

impl ColorTrace {
    pub fn new(prefix: ColorSet, cycle: ColorSet) -> ColorTrace {
        ColorTrace {
            elem: prefix.union(cycle),
            occ_inf: cycle,
        }
    }

    pub fn occ_fin(&self) -> ColorSet {
        self.elem.difference(self.occ_inf)
    }
}

/// Positive Boolean combination of `Inf(C)` / `Fin(C)` primitives.
///
/// The constructors flatten nested connectives, fold the constants
/// (`Fin(∅)` is true, `Inf(∅)` is false) and merge sibling primitives that
/// combine into one (`Inf(A) | Inf(B) = Inf(A ∪ B)`,
/// `Fin(A) & Fin(B) = Fin(A ∪ B)`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AccFormula {
    Inf(ColorSet),
    Fin(ColorSet),
    And(Vec<AccFormula>),
    Or(Vec<AccFormula>),
}

/// One disjunct of an acceptance formula in disjunctive normal form:
/// every set in `inf` must be hit infinitely often and no color of `fin`
/// may occur infinitely often.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Conjunct {
    pub inf: Vec<ColorSet>,
    pub fin: ColorSet,
}

impl Conjunct {
    pub fn holds(&self, occ_inf: ColorSet) -> bool {
        !occ_inf.intersects(self.fin) && self.inf.iter().all(|s| occ_inf.intersects(*s))
    }
}

impl AccFormula {
    pub fn t() -> AccFormula {
        AccFormula::Fin(ColorSet::empty())
    }

    pub fn f() -> AccFormula {
        AccFormula::Inf(ColorSet::empty())
    }

    pub fn is_true(&self) -> bool {
        matches!(self, AccFormula::Fin(s) if s.is_empty())
    }

    pub fn is_false(&self) -> bool {
        matches!(self, AccFormula::Inf(s) if s.is_empty())
    }

    pub fn and<I: IntoIterator<Item = AccFormula>>(items: I) -> AccFormula {
        let mut out: Vec<AccFormula> = Vec::new();
        let mut fin_slot: Option<usize> = None;
        let mut queue: Vec<AccFormula> = items.into_iter().collect();
        queue.reverse();
        while let Some(item) = queue.pop() {
            match item {
                AccFormula::And(inner) => queue.extend(inner.into_iter().rev()),
                f if f.is_true() => {}
                f if f.is_false() => return AccFormula::f(),
                AccFormula::Fin(s) => match fin_slot {
                    Some(i) => {
                        if let AccFormula::Fin(old) = &mut out[i] {
                            *old = old.union(s);
                        }
                    }
                    None => {
                        fin_slot = Some(out.len());
                        out.push(AccFormula::Fin(s));
                    }
                },
                other => out.push(other),
            }
        }
        match out.len() {
            0 => AccFormula::t(),
            1 => out.pop().unwrap(),
            _ => AccFormula::And(out),
        }
    }

    pub fn or<I: IntoIterator<Item = AccFormula>>(items: I) -> AccFormula {
        let mut out: Vec<AccFormula> = Vec::new();
        let mut inf_slot: Option<usize> = None;
        let mut queue: Vec<AccFormula> = items.into_iter().collect();
        queue.reverse();
        while let Some(item) = queue.pop() {
            match item {
                AccFormula::Or(inner) => queue.extend(inner.into_iter().rev()),
                f if f.is_false() => {}
                f if f.is_true() => return AccFormula::t(),
                AccFormula::Inf(s) => match inf_slot {
                    Some(i) => {
                        if let AccFormula::Inf(old) = &mut out[i] {
                            *old = old.union(s);
                        }
                    }
                    None => {
                        inf_slot = Some(out.len());
                        out.push(AccFormula::Inf(s));
                    }
                },
                other => out.push(other),
            }
        }
        match out.len() {
            0 => AccFormula::f(),
            1 => out.pop().unwrap(),
            _ => AccFormula::Or(out),
        }
    }

    /// Evaluates the formula on the set of infinitely occurring colors.
    pub fn eval(&self, occ_inf: ColorSet) -> bool {
        match self {
            AccFormula::Inf(s) => occ_inf.intersects(*s),
            AccFormula::Fin(s) => !occ_inf.intersects(*s),
            AccFormula::And(fs) => fs.iter().all(|f| f.eval(occ_inf)),
            AccFormula::Or(fs) => fs.iter().any(|f| f.eval(occ_inf)),
        }
    }

    /// The negation, with `¬Inf = Fin` and `¬Fin = Inf` pushed inwards.
    pub fn negate(&self) -> AccFormula {
        match self {
            AccFormula::Inf(s) => AccFormula::Fin(*s),
            AccFormula::Fin(s) => AccFormula::Inf(*s),
            AccFormula::And(fs) => AccFormula::or(fs.iter().map(AccFormula::negate)),
            AccFormula::Or(fs) => AccFormula::and(fs.iter().map(AccFormula::negate)),
        }
    }

    /// Symbol count: one per primitive and per connective.
    pub fn size(&self) -> usize {
        match self {
            AccFormula::Inf(_) | AccFormula::Fin(_) => 1,
            AccFormula::And(fs) | AccFormula::Or(fs) => {
                fs.len().saturating_sub(1) + fs.iter().map(AccFormula::size).sum::<usize>()
            }
        }
    }

    pub fn colors(&self) -> ColorSet {
        match self {
            AccFormula::Inf(s) | AccFormula::Fin(s) => *s,
            AccFormula::And(fs) | AccFormula::Or(fs) => {
                fs.iter().fold(ColorSet::empty(), |acc, f| acc.union(f.colors()))
            }
        }
    }

    /// Disjunctive normal form.  Unsatisfiable disjuncts (`Inf(∅)`) are
    /// dropped and duplicates removed; the empty list means false.
    pub fn dnf(&self) -> Vec<Conjunct> {
        let raw = match self {
            AccFormula::Inf(s) if s.is_empty() => Vec::new(),
            AccFormula::Inf(s) => vec![Conjunct {
                inf: vec![*s],
                fin: ColorSet::empty(),
            }],
            AccFormula::Fin(s) => vec![Conjunct {
                inf: Vec::new(),
                fin: *s,
            }],
            AccFormula::Or(fs) => fs.iter().flat_map(AccFormula::dnf).collect(),
            AccFormula::And(fs) => {
                let mut acc = vec![Conjunct::default()];
                for f in fs {
                    let part = f.dnf();
                    let mut next = Vec::with_capacity(acc.len() * part.len());
                    for a in &acc {
                        for b in &part {
                            let mut inf = a.inf.clone();
                            inf.extend(b.inf.iter().copied());
                            next.push(Conjunct {
                                inf,
                                fin: a.fin.union(b.fin),
                            });
                        }
                    }
                    acc = next;
                }
                acc
            }
        };
        let mut seen = std::collections::HashSet::new();
        raw.into_iter()
            .map(|mut c| {
                c.inf.sort();
                c.inf.dedup();
                c
            })
            .filter(|c| seen.insert(c.clone()))
            .collect()
    }
}

/// Acceptance conditions: an explicit Emerson-Lei formula or one of the
/// classical named families.  Reachability and safety constrain the set of
/// colors seen at all; every other family only looks at the colors seen
/// infinitely often.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Acceptance {
    El(AccFormula),
    Reachability(ColorSet),
    Safety(ColorSet),
    Buchi(ColorSet),
    CoBuchi(ColorSet),
    /// Max-even parity over the colors `1..=colors`.
    Parity { colors: ColorId },
    /// Pairs `(E, F)`: some pair has `E` infinitely often and `F` finitely often.
    Rabin(Vec<(ColorSet, ColorSet)>),
    /// Pairs `(E, F)`: every pair has `E` finitely often or `F` infinitely often.
    Streett(Vec<(ColorSet, ColorSet)>),
    /// Sets `E`: some set has all of its colors infinitely often.
    Muller(Vec<ColorSet>),
}

impl Acceptance {
    pub fn family_name(&self) -> &'static str {
        match self {
            Acceptance::El(_) => "emerson-lei",
            Acceptance::Reachability(_) => "reachability",
            Acceptance::Safety(_) => "safety",
            Acceptance::Buchi(_) => "buchi",
            Acceptance::CoBuchi(_) => "co-buchi",
            Acceptance::Parity { .. } => "parity",
            Acceptance::Rabin(_) => "rabin",
            Acceptance::Streett(_) => "streett",
            Acceptance::Muller(_) => "muller",
        }
    }

    /// True for the conditions that only depend on infinitely occurring colors.
    pub fn is_prefix_independent(&self) -> bool {
        !matches!(self, Acceptance::Reachability(_) | Acceptance::Safety(_))
    }

    /// The defining Emerson-Lei formula; `None` for reachability and safety.
    pub fn to_el(&self) -> Option<AccFormula> {
        Some(match self {
            Acceptance::El(f) => f.clone(),
            Acceptance::Reachability(_) | Acceptance::Safety(_) => return None,
            Acceptance::Buchi(b) => AccFormula::Inf(*b),
            Acceptance::CoBuchi(b) => AccFormula::Fin(*b),
            Acceptance::Parity { colors } => parity_formula(*colors),
            Acceptance::Rabin(pairs) => AccFormula::or(
                pairs
                    .iter()
                    .map(|&(e, f)| AccFormula::and([AccFormula::Inf(e), AccFormula::Fin(f)])),
            ),
            Acceptance::Streett(pairs) => AccFormula::and(
                pairs
                    .iter()
                    .map(|&(e, f)| AccFormula::or([AccFormula::Fin(e), AccFormula::Inf(f)])),
            ),
            Acceptance::Muller(sets) => AccFormula::or(sets.iter().map(|s| {
                AccFormula::and(s.iter().map(|c| AccFormula::Inf(ColorSet::singleton(c))))
            })),
        })
    }

    pub fn eval(&self, trace: &ColorTrace) -> bool {
        match self {
            Acceptance::Reachability(r) => trace.elem.intersects(*r),
            Acceptance::Safety(s) => trace.elem.is_subset(*s),
            Acceptance::El(f) => f.eval(trace.occ_inf),
            Acceptance::Buchi(b) => trace.occ_inf.intersects(*b),
            Acceptance::CoBuchi(b) => !trace.occ_inf.intersects(*b),
            Acceptance::Parity { colors } => trace
                .occ_inf
                .intersection(ColorSet::range(1, *colors))
                .max()
                .is_some_and(|c| c % 2 == 0),
            Acceptance::Rabin(pairs) => pairs
                .iter()
                .any(|&(e, f)| trace.occ_inf.intersects(e) && !trace.occ_inf.intersects(f)),
            Acceptance::Streett(pairs) => pairs
                .iter()
                .all(|&(e, f)| !trace.occ_inf.intersects(e) || trace.occ_inf.intersects(f)),
            Acceptance::Muller(sets) => sets.iter().any(|s| s.is_subset(trace.occ_inf)),
        }
    }

    /// Evaluation on a trace whose colors must all lie in `1..=index`.
    pub fn eval_checked(&self, trace: &ColorTrace, index: u32) -> Result<bool, AutomatonError> {
        if let Some(c) = trace.elem.union(trace.occ_inf).iter().find(|&c| c == 0 || c > index) {
            return Err(AutomatonError::ColorOutOfRange { color: c, index });
        }
        Ok(self.eval(trace))
    }

    /// Every color the condition mentions.
    pub fn colors(&self) -> ColorSet {
        match self {
            Acceptance::Reachability(s) | Acceptance::Safety(s) => *s,
            other => other.to_el().map(|f| f.colors()).unwrap_or_default(),
        }
    }

    /// Size of the defining formula, or `|R|` / `|S|`.
    pub fn size(&self) -> usize {
        match self {
            Acceptance::Reachability(s) | Acceptance::Safety(s) => s.len(),
            other => other.to_el().map(|f| f.size()).unwrap_or(0),
        }
    }

    /// Evaluation on a bare set of infinitely occurring colors.  Only
    /// meaningful for prefix-independent conditions.
    pub fn eval_inf(&self, occ_inf: ColorSet) -> bool {
        self.eval(&ColorTrace {
            elem: occ_inf,
            occ_inf,
        })
    }
}

/// `⋁_{c even, c ≤ d} Inf({c}) ∧ Fin({c+1..d})`.
pub fn parity_formula(colors: ColorId) -> AccFormula {
    AccFormula::or((2..=colors).rev().step_by(1).filter(|c| c % 2 == 0).map(|c| {
        let above = if c < colors {
            ColorSet::range(c + 1, colors)
        } else {
            ColorSet::empty()
        };
        AccFormula::and([AccFormula::Inf(ColorSet::singleton(c)), AccFormula::Fin(above)])
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub source: StateId,
    pub guard: Formula,
    pub target: StateId,
    pub color: ColorId,
}

/// A Hanoi omega-automaton without its acceptance condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hoa {
    pub name: Option<String>,
    pub state_names: Vec<Option<String>>,
    pub initial: Vec<StateId>,
    pub props: Vec<String>,
    pub transitions: Vec<Transition>,
    /// Number of colors `d`.
    pub index: u32,
}

/// An automaton together with its acceptance condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    pub hoa: Hoa,
    pub acc: Acceptance,
}

impl Hoa {
    /// Automaton with `states` states, the given propositions, no
    /// transitions and state 0 initial (when there is a state).
    pub fn new(states: usize, props: Vec<String>, index: u32) -> Hoa {
        Hoa {
            name: None,
            state_names: vec![None; states],
            initial: if states > 0 { vec![0] } else { Vec::new() },
            props,
            transitions: Vec::new(),
            index,
        }
    }

    /// Propositions named `p0, p1, ...`.
    pub fn with_anonymous_props(states: usize, num_props: usize, index: u32) -> Hoa {
        Hoa::new(states, (0..num_props).map(|i| format!("p{i}")).collect(), index)
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn num_props(&self) -> usize {
        self.props.len()
    }

    pub fn prop_ids(&self) -> Vec<PropId> {
        (0..self.props.len() as u32).map(PropId).collect()
    }

    pub fn add_state(&mut self) -> StateId {
        self.state_names.push(None);
        self.state_names.len() - 1
    }

    pub fn add_transition(&mut self, source: StateId, guard: Formula, target: StateId, color: ColorId) {
        self.transitions.push(Transition {
            source,
            guard,
            target,
            color,
        });
    }

    /// Outgoing transition indices per state, in insertion order.
    pub fn outgoing(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_states()];
        for (i, t) in self.transitions.iter().enumerate() {
            out[t.source].push(i);
        }
        out
    }

    pub fn out_transitions(&self, q: StateId) -> impl Iterator<Item = (usize, &Transition)> {
        self.transitions
            .iter()
            .enumerate()
            .filter(move |(_, t)| t.source == q)
    }

    /// `|Q| + |P| + Σ ‖guard‖`.
    pub fn size(&self) -> usize {
        self.num_states() + self.num_props() + self.transitions.iter().map(|t| t.guard.size()).sum::<usize>()
    }

    /// Checks indices: states, propositions and colors in `1..=d`.
    pub fn validate(&self) -> Result<(), AutomatonError> {
        let n = self.num_states();
        if let Some(&q) = self.initial.iter().find(|&&q| q >= n) {
            return Err(AutomatonError::StateOutOfRange(q));
        }
        for t in &self.transitions {
            for q in [t.source, t.target] {
                if q >= n {
                    return Err(AutomatonError::StateOutOfRange(q));
                }
            }
            if t.color == 0 || t.color > self.index {
                return Err(AutomatonError::ColorOutOfRange {
                    color: t.color,
                    index: self.index,
                });
            }
            if let Some(p) = t.guard.max_atom() {
                if p.index() >= self.num_props() {
                    return Err(AutomatonError::PropOutOfRange(p));
                }
            }
        }
        Ok(())
    }

    /// One initial state and pairwise disjoint guards out of every state.
    pub fn is_deterministic(&self) -> bool {
        if self.initial.len() != 1 {
            return false;
        }
        self.outgoing().iter().all(|out| {
            out.iter().enumerate().all(|(i, &a)| {
                out[i + 1..].iter().all(|&b| {
                    sat(&Formula::and([
                        self.transitions[a].guard.clone(),
                        self.transitions[b].guard.clone(),
                    ]))
                    .is_none()
                })
            })
        })
    }

    /// Every state has a transition for every valuation.
    pub fn is_complete(&self) -> bool {
        self.outgoing().iter().all(|out| {
            let cover = Formula::or(out.iter().map(|&i| self.transitions[i].guard.clone()));
            sat(&Formula::not(cover)).is_none()
        })
    }

    /// Transitions out of `q` enabled by `v`.
    pub fn successor(&self, q: StateId, v: &Valuation) -> Vec<&Transition> {
        self.out_transitions(q)
            .filter(|(_, t)| t.guard.eval_with(&|p| v.get(p)))
            .map(|(_, t)| t)
            .collect()
    }

    /// The common color of every state's outgoing transitions, if the
    /// coloring is state-based.  States without transitions get `None`.
    pub fn state_coloring(&self) -> Option<Vec<Option<ColorId>>> {
        let mut colors = vec![None; self.num_states()];
        for t in &self.transitions {
            match colors[t.source] {
                None => colors[t.source] = Some(t.color),
                Some(c) if c == t.color => {}
                Some(_) => return None,
            }
        }
        Some(colors)
    }

    pub fn is_state_based(&self) -> bool {
        self.state_coloring().is_some()
    }

    /// States reachable from the initial states along any transition.
    pub fn reachable_states(&self) -> Vec<bool> {
        let out = self.outgoing();
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<StateId> = self.initial.clone();
        for &q in &self.initial {
            seen[q] = true;
        }
        while let Some(q) = stack.pop() {
            for &i in &out[q] {
                let t = self.transitions[i].target;
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// Replaces every guard by its satisfying valuations.
    pub fn expand_explicit(&self, max_props: usize) -> Result<ExplicitAutomaton, AutomatonError> {
        if self.num_props() > max_props {
            return Err(AutomatonError::BoundExceeded {
                what: "number of propositions",
                actual: self.num_props(),
                limit: max_props,
            });
        }
        let mut transitions = Vec::new();
        for (i, t) in self.transitions.iter().enumerate() {
            for letter in 0..1u64 << self.num_props() {
                if t.guard.eval_bits(letter) {
                    transitions.push(ExplicitTransition {
                        source: t.source,
                        letter,
                        target: t.target,
                        color: t.color,
                        origin: i,
                    });
                }
            }
        }
        Ok(ExplicitAutomaton {
            num_states: self.num_states(),
            initial: self.initial.clone(),
            num_props: self.num_props(),
            transitions,
            index: self.index,
        })
    }
}

/// A transition labelled by a single letter of `Val(P)` (bit `i` of the
/// letter is proposition `i`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExplicitTransition {
    pub source: StateId,
    pub letter: u64,
    pub target: StateId,
    pub color: ColorId,
    /// Index of the symbolic transition this one came from.
    pub origin: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitAutomaton {
    pub num_states: usize,
    pub initial: Vec<StateId>,
    pub num_props: usize,
    pub transitions: Vec<ExplicitTransition>,
    pub index: u32,
}

impl ExplicitAutomaton {
    pub fn alphabet_size(&self) -> u64 {
        1 << self.num_props
    }

    /// Letter-labelled successors per state.
    pub fn outgoing(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_states];
        for (i, t) in self.transitions.iter().enumerate() {
            out[t.source].push(i);
        }
        out
    }

    pub fn letters_of(&self, q: StateId) -> BTreeSet<u64> {
        self.transitions
            .iter()
            .filter(|t| t.source == q)
            .map(|t| t.letter)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn color_set_basics() {
        let s: ColorSet = [1, 3, 4].into_iter().collect();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 3, 4]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.max(), Some(4));
        assert_eq!(s.min(), Some(1));
        assert!(ColorSet::singleton(3).is_subset(s));
        assert_eq!(s.subsets().count(), 8);
        assert_eq!(ColorSet::empty().subsets().count(), 1);
        assert_eq!(format!("{s}"), "{1,3,4}");
        assert_eq!(ColorSet::range(2, 4), [2, 3, 4].into_iter().collect());
    }

    #[test]
    fn acceptance_examples() {
        let t = ColorTrace::new(ColorSet::empty(), [1, 2].into_iter().collect());
        assert!(Acceptance::El(AccFormula::Inf(ColorSet::singleton(1))).eval(&t));
        let safety = Acceptance::Safety(ColorSet::singleton(2));
        assert!(!safety.eval(&ColorTrace::new(ColorSet::singleton(1), ColorSet::singleton(2))));
        assert!(safety.eval(&ColorTrace::new(ColorSet::empty(), ColorSet::singleton(2))));
        assert_eq!(
            safety.eval_checked(&ColorTrace::new(ColorSet::empty(), ColorSet::singleton(5)), 2),
            Err(AutomatonError::ColorOutOfRange { color: 5, index: 2 })
        );
    }

    #[test]
    fn parity_formula_shape() {
        // d = 4: Inf(4) | (Inf(2) & Fin(3,4))
        let f = parity_formula(4);
        assert!(f.eval(ColorSet::singleton(4)));
        assert!(f.eval([1, 2].into_iter().collect()));
        assert!(!f.eval([2, 3].into_iter().collect()));
        assert!(!f.eval(ColorSet::empty()));
        assert!(parity_formula(1).is_false());
    }

    #[test]
    fn named_families_match_their_formulas() {
        let d = 4;
        let all = ColorSet::range(1, d);
        let sets: Vec<ColorSet> = all.subsets().collect();
        let mut families = vec![
            Acceptance::Buchi([1, 3].into_iter().collect()),
            Acceptance::CoBuchi(ColorSet::singleton(2)),
            Acceptance::Parity { colors: 4 },
            Acceptance::Parity { colors: 3 },
            Acceptance::Rabin(vec![(sets[3], sets[4]), (sets[8], sets[1])]),
            Acceptance::Streett(vec![(sets[3], sets[4]), (sets[8], sets[1]), (sets[0], sets[6])]),
            Acceptance::Muller(vec![sets[5], sets[10], sets[0]]),
            Acceptance::Muller(Vec::new()),
        ];
        families.push(Acceptance::Rabin(Vec::new()));
        for acc in families {
            let el = Acceptance::El(acc.to_el().unwrap());
            for &inf in &sets {
                for &fin in &sets {
                    let trace = ColorTrace::new(fin, inf);
                    assert_eq!(acc.eval(&trace), el.eval(&trace), "{acc:?} on {trace:?}");
                }
            }
        }
    }

    #[test]
    fn dnf_and_negation_agree_with_eval() {
        let a = |c| AccFormula::Inf(ColorSet::singleton(c));
        let f = |c| AccFormula::Fin(ColorSet::singleton(c));
        let phi = AccFormula::and([
            AccFormula::or([a(1), f(2)]),
            AccFormula::or([AccFormula::and([a(3), f(1)]), a(4)]),
        ]);
        let dnf = phi.dnf();
        for inf in ColorSet::range(1, 4).subsets() {
            assert_eq!(phi.eval(inf), dnf.iter().any(|c| c.holds(inf)));
            assert_eq!(phi.negate().eval(inf), !phi.eval(inf));
        }
        assert!(AccFormula::f().dnf().is_empty());
        assert_eq!(AccFormula::t().dnf(), vec![Conjunct::default()]);
    }

    #[test]
    fn constructors_merge_primitives() {
        let inf = |c| AccFormula::Inf(ColorSet::singleton(c));
        assert_eq!(AccFormula::or([inf(1), inf(2)]), AccFormula::Inf([1, 2].into_iter().collect()));
        assert_eq!(AccFormula::and([AccFormula::t(), inf(1)]), inf(1));
        assert!(AccFormula::and([AccFormula::f(), inf(1)]).is_false());
    }

    #[test]
    fn arbiter_is_deterministic_complete_state_based() {
        let a = fixtures::arbiter_automaton();
        assert!(a.is_deterministic());
        assert!(a.is_complete());
        assert!(a.is_state_based());
        let v = Valuation::from_pairs([(PropId(0), false), (PropId(1), false)]);
        let succ = a.successor(0, &v);
        assert_eq!(succ.len(), 1);
        assert_eq!((succ[0].target, succ[0].color), (0, 1));
    }

    #[test]
    fn determinism_and_completeness_counterexamples() {
        let mut a = Hoa::with_anonymous_props(1, 1, 1);
        a.add_transition(0, Formula::True, 0, 1);
        a.add_transition(0, Formula::True, 0, 1);
        assert!(!a.is_deterministic());
        let mut b = Hoa::with_anonymous_props(1, 1, 1);
        b.add_transition(0, Formula::atom(0), 0, 1);
        assert!(!b.is_complete());
        assert!(b.is_deterministic());
        let c = Hoa::with_anonymous_props(2, 1, 1);
        assert!(c.successor(1, &Valuation::from_bits(&c.prop_ids(), 0)).is_empty());
    }

    #[test]
    fn explicit_expansion_counts() {
        let mut a = Hoa::with_anonymous_props(1, 2, 1);
        a.add_transition(0, Formula::True, 0, 1);
        a.add_transition(0, Formula::and([Formula::atom(0), Formula::not(Formula::atom(0))]), 0, 1);
        let e = a.expand_explicit(12).unwrap();
        assert_eq!(e.transitions.len(), 4);
        assert!(e.transitions.iter().all(|t| t.origin == 0));
        assert!(matches!(
            a.expand_explicit(1),
            Err(AutomatonError::BoundExceeded { limit: 1, .. })
        ));
    }
}
