use std::fmt::Write as _;

use thiserror::Error;

use crate::automaton::{Automaton, ColorSet, ColorTrace, Hoa, StateId};
use crate::formula::{sat, Formula, PropId, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LassoError {
    #[error("the cycle is empty")]
    EmptyCycle,
    #[error("transition {0} does not exist")]
    NoSuchTransition(usize),
    #[error("the lasso does not start in an initial state")]
    NotInitial,
    #[error("step {0} does not continue from the previous target")]
    Broken(usize),
    #[error("the cycle does not return to its first state")]
    Open,
    #[error("the valuation of step {0} violates its guard")]
    Guard(usize),
    #[error("the automaton is not state-based")]
    NotStateBased,
    #[error("the lasso is not accepting")]
    Rejected,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LassoStep {
    /// Index into the automaton's transitions.
    pub transition: usize,
    /// A full valuation of the propositions satisfying the guard.
    pub valuation: Valuation,
}

/// An ultimately periodic run `prefix · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lasso {
    pub prefix: Vec<LassoStep>,
    pub cycle: Vec<LassoStep>,
}

/// A full valuation of `0..num_props` satisfying `guard`, unassigned
/// propositions false.
pub(crate) fn witness_valuation(guard: &Formula, num_props: usize) -> Option<Valuation> {
    let partial = sat(guard)?;
    Some(Valuation::from_pairs(
        (0..num_props as u32).map(|p| (PropId(p), partial.get(PropId(p)).unwrap_or(false))),
    ))
}

impl Lasso {
    /// Builds a lasso from transition indices, picking a witness valuation
    /// per guard.  `None` if some guard is unsatisfiable.
    pub fn from_transitions(a: &Hoa, prefix: &[usize], cycle: &[usize]) -> Option<Lasso> {
        let step = |&i: &usize| {
            witness_valuation(&a.transitions[i].guard, a.num_props()).map(|valuation| LassoStep {
                transition: i,
                valuation,
            })
        };
        Some(Lasso {
            prefix: prefix.iter().map(step).collect::<Option<_>>()?,
            cycle: cycle.iter().map(step).collect::<Option<_>>()?,
        })
    }

    pub fn len(&self) -> (usize, usize) {
        (self.prefix.len(), self.cycle.len())
    }

    fn steps(&self) -> impl Iterator<Item = &LassoStep> {
        self.prefix.iter().chain(&self.cycle)
    }

    /// Checks the structural invariants: nonempty closed cycle, chained
    /// steps starting in an initial state, valuations satisfying guards.
    pub fn validate(&self, a: &Hoa) -> Result<(), LassoError> {
        if self.cycle.is_empty() {
            return Err(LassoError::EmptyCycle);
        }
        let mut prev: Option<StateId> = None;
        for (k, s) in self.steps().enumerate() {
            let t = a
                .transitions
                .get(s.transition)
                .ok_or(LassoError::NoSuchTransition(s.transition))?;
            match prev {
                None if !a.initial.contains(&t.source) => return Err(LassoError::NotInitial),
                Some(p) if p != t.source => return Err(LassoError::Broken(k)),
                _ => {}
            }
            if !t.guard.eval_with(&|p| s.valuation.get(p)) {
                return Err(LassoError::Guard(k));
            }
            prev = Some(t.target);
        }
        let first = a.transitions[self.cycle[0].transition].source;
        if prev != Some(first) {
            return Err(LassoError::Open);
        }
        Ok(())
    }

    pub fn trace(&self, a: &Hoa) -> ColorTrace {
        let colors = |steps: &[LassoStep]| -> ColorSet {
            steps.iter().map(|s| a.transitions[s.transition].color).collect()
        };
        ColorTrace::new(colors(&self.prefix), colors(&self.cycle))
    }

    /// Valid and accepted by the automaton's condition.
    pub fn check(&self, a: &Automaton) -> Result<(), LassoError> {
        self.validate(&a.hoa)?;
        if !a.acc.eval(&self.trace(&a.hoa)) {
            return Err(LassoError::Rejected);
        }
        Ok(())
    }

    /// The word read, one letter (bit `i` = proposition `i`) per step.
    pub fn word(&self, a: &Hoa) -> (Vec<u64>, Vec<u64>) {
        let props = a.prop_ids();
        let letters = |steps: &[LassoStep]| steps.iter().map(|s| s.valuation.bits_over(&props)).collect();
        (letters(&self.prefix), letters(&self.cycle))
    }

    /// `prefix | cycle` with `(state,bits,color)` steps, where `bits` is the
    /// valuation as a bitmask over the propositions.
    pub fn format(&self, a: &Hoa) -> String {
        let props = a.prop_ids();
        let part = |steps: &[LassoStep]| {
            let mut s = String::new();
            for (k, st) in steps.iter().enumerate() {
                let t = &a.transitions[st.transition];
                if k > 0 {
                    s.push(' ');
                }
                let _ = write!(s, "({},{},{})", t.source, st.valuation.bits_over(&props), t.color);
            }
            s
        };
        let prefix = part(&self.prefix);
        let cycle = part(&self.cycle);
        match prefix.is_empty() {
            true => format!("| {cycle}"),
            false => format!("{prefix} | {cycle}"),
        }
    }
}

/// Repeatedly deletes, for states in ascending id, segments between two
/// occurrences of the state whose colors also occur in the rest of the
/// prefix (resp. cycle), so that the trace sets are unchanged.  On a
/// state-based automaton both parts end up with at most `|Q|²` steps.
pub fn shrink_lasso(a: &Hoa, l: &Lasso) -> Result<Lasso, LassoError> {
    if !a.is_state_based() {
        return Err(LassoError::NotStateBased);
    }
    l.validate(a)?;
    let trace = l.trace(a);
    let color = |s: &LassoStep| a.transitions[s.transition].color;
    let source = |s: &LassoStep| a.transitions[s.transition].source;
    let mut cycle = l.cycle.clone();
    let mut prefix = l.prefix.clone();
    // cycle: colors of the removed segment must stay on the cycle
    'cycle: loop {
        for q in 0..a.num_states() {
            let pos: Vec<usize> = (0..cycle.len()).filter(|&i| source(&cycle[i]) == q).collect();
            for w in pos.windows(2) {
                let (i, j) = (w[0], w[1]);
                let rest: ColorSet = cycle[..i].iter().chain(&cycle[j..]).map(color).collect();
                let seg: ColorSet = cycle[i..j].iter().map(color).collect();
                if seg.is_subset(rest) {
                    cycle.drain(i..j);
                    continue 'cycle;
                }
            }
        }
        break;
    }
    let cycle_colors: ColorSet = cycle.iter().map(color).collect();
    let entry = source(&cycle[0]);
    'prefix: loop {
        for q in 0..a.num_states() {
            // the end of the prefix counts as an occurrence of the cycle entry
            let pos: Vec<usize> = (0..=prefix.len())
                .filter(|&i| if i == prefix.len() { q == entry } else { source(&prefix[i]) == q })
                .collect();
            for w in pos.windows(2) {
                let (i, j) = (w[0], w[1]);
                let rest: ColorSet = prefix[..i]
                    .iter()
                    .chain(&prefix[j..])
                    .map(color)
                    .collect::<ColorSet>()
                    .union(cycle_colors);
                let seg: ColorSet = prefix[i..j].iter().map(color).collect();
                if seg.is_subset(rest) {
                    prefix.drain(i..j);
                    continue 'prefix;
                }
            }
        }
        break;
    }
    let out = Lasso { prefix, cycle };
    debug_assert_eq!(out.trace(a), trace);
    out.validate(a)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn validation_catches_breaks() {
        let a = fixtures::arbiter_automaton();
        let l = Lasso::from_transitions(&a, &[], &[0]).unwrap();
        assert_eq!(l.validate(&a), Ok(()));
        assert_eq!(l.format(&a), "| (0,0,1)");
        let bad = Lasso::from_transitions(&a, &[], &[1]).unwrap();
        assert_eq!(bad.validate(&a), Err(LassoError::Open));
        let bad = Lasso::from_transitions(&a, &[6], &[6]).unwrap();
        assert_eq!(bad.validate(&a), Err(LassoError::NotInitial));
    }

    #[test]
    fn repeated_subcycle_is_removed() {
        let a = fixtures::arbiter_automaton();
        // q1 -g-> q2 -!r!g-> q1, five times, then the q1 self-loop
        let mut cycle = Vec::new();
        for _ in 0..5 {
            cycle.extend([1, 3]);
        }
        cycle.push(0);
        let l = Lasso::from_transitions(&a, &[0, 0], &cycle).unwrap();
        let s = shrink_lasso(&a, &l).unwrap();
        assert_eq!(s.trace(&a), l.trace(&a));
        assert_eq!(s.len(), (0, 1));
        let single = Lasso::from_transitions(&a, &[], &[0]).unwrap();
        assert_eq!(shrink_lasso(&a, &single).unwrap(), single);
    }
}
