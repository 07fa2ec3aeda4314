use crate::automaton::{Acceptance, Automaton, Conjunct, Hoa};
use crate::formula::sat;
use crate::graph::{ColorGraph, EdgeLasso};
use crate::transforms::{reach_to_buchi, safety_to_cobuchi, to_state_based, Transformed};

use super::lasso::{shrink_lasso, Lasso, LassoStep};
use super::AnalysisError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Empty,
    Nonempty(Lasso),
}

impl Verdict {
    pub fn is_empty(&self) -> bool {
        matches!(self, Verdict::Empty)
    }

    pub fn lasso(&self) -> Option<&Lasso> {
        match self {
            Verdict::Empty => None,
            Verdict::Nonempty(l) => Some(l),
        }
    }
}

/// The colored graph of the transitions with satisfiable guards, with the
/// transition index of every edge.
fn pruned_graph(a: &Hoa) -> (ColorGraph, Vec<usize>) {
    let mut g = ColorGraph::new(a.num_states());
    let mut origin = Vec::new();
    for (i, t) in a.transitions.iter().enumerate() {
        if sat(&t.guard).is_some() {
            g.add_edge(t.source, t.target, t.color);
            origin.push(i);
        }
    }
    (g, origin)
}

fn to_lasso(a: &Hoa, l: &EdgeLasso, origin: &[usize]) -> Lasso {
    let prefix: Vec<usize> = l.prefix.iter().map(|&e| origin[e]).collect();
    let cycle: Vec<usize> = l.cycle.iter().map(|&e| origin[e]).collect();
    Lasso::from_transitions(a, &prefix, &cycle).expect("pruned guards are satisfiable")
}

fn search(a: &Hoa, dnf: &[Conjunct]) -> Option<Lasso> {
    let (g, origin) = pruned_graph(a);
    g.find_lasso(&a.initial, dnf).map(|l| to_lasso(a, &l, &origin))
}

/// Some infinite run from `state` (any colors).
fn continuation(a: &Hoa, state: usize) -> Option<Lasso> {
    let (g, origin) = pruned_graph(a);
    let l = g.find_lasso(&[state], &[Conjunct::default()])?;
    let prefix: Vec<usize> = l.prefix.iter().map(|&e| origin[e]).collect();
    let cycle: Vec<usize> = l.cycle.iter().map(|&e| origin[e]).collect();
    // valid as a lasso only relative to `state`; the caller prepends a path
    Lasso::from_transitions(a, &prefix, &cycle)
}

/// Maps a lasso of `t.hoa` back to the input automaton of `t`.  Steps into
/// an added state (the reachability sink) end the mapped part; the run is
/// then continued with any infinite run of the input.
fn map_back(input: &Hoa, t: &Transformed, l: &Lasso) -> Option<Lasso> {
    let mut mapped: Vec<LassoStep> = Vec::new();
    for s in l.prefix.iter().chain(&l.cycle) {
        let out_t = &t.hoa.transitions[s.transition];
        let origin = t.transition_origin[s.transition]?;
        mapped.push(LassoStep {
            transition: origin,
            valuation: s.valuation.clone(),
        });
        if t.state_origin[out_t.target].is_none() {
            let target = input.transitions[origin].target;
            let rest = continuation(input, target)?;
            let mut prefix = mapped;
            prefix.extend(rest.prefix);
            return Some(Lasso {
                prefix,
                cycle: rest.cycle,
            });
        }
    }
    let cycle = mapped.split_off(l.prefix.len());
    Some(Lasso { prefix: mapped, cycle })
}

/// Emptiness with a witness: guards are pruned by satisfiability, the
/// condition is brought to disjunctive normal form and the colored graph is
/// searched for a reachable cycle fulfilling a disjunct.  Reachability and
/// safety go through their Büchi / co-Büchi constructions.
pub fn is_empty(a: &Automaton) -> Verdict {
    let found = match &a.acc {
        Acceptance::Reachability(_) => via(a, reach_to_buchi(a).expect("reachability input")),
        Acceptance::Safety(_) => via(a, safety_to_cobuchi(a).expect("safety input")),
        acc => {
            let el = acc.to_el().expect("prefix-independent condition");
            search(&a.hoa, &el.dnf())
        }
    };
    match found {
        Some(l) => {
            debug_assert_eq!(l.check(a), Ok(()));
            Verdict::Nonempty(l)
        }
        None => Verdict::Empty,
    }
}

fn via(a: &Automaton, t: Transformed) -> Option<Lasso> {
    match is_empty(&t.automaton()) {
        Verdict::Empty => None,
        Verdict::Nonempty(l) => Some(map_back(&a.hoa, &t, &l).expect("witness maps back to the input")),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub prefix_len: usize,
    pub cycle_len: usize,
    /// `(|Q|·d)²` of the input.
    pub bound: usize,
    /// States of the state-based form the witness lives in.
    pub state_based_states: usize,
    /// The shrunk witness, on the state-based form.
    pub lasso: Lasso,
    pub state_based: Automaton,
}

impl BoundReport {
    pub fn holds(&self) -> bool {
        self.prefix_len <= self.bound && self.cycle_len <= self.bound
    }
}

/// Converts to the state-based form, finds and shrinks a witness, and
/// reports its lengths against `(|Q|·d)²`.
pub fn check_lasso_bound(a: &Automaton) -> Result<BoundReport, AnalysisError> {
    let sb = to_state_based(a).automaton();
    let Verdict::Nonempty(l) = is_empty(&sb) else {
        return Err(AnalysisError::Empty);
    };
    let short = shrink_lasso(&sb.hoa, &l)?;
    let q = a.hoa.num_states() * a.hoa.index.max(1) as usize;
    Ok(BoundReport {
        prefix_len: short.prefix.len(),
        cycle_len: short.cycle.len(),
        bound: q * q,
        state_based_states: sb.hoa.num_states(),
        lasso: short,
        state_based: sb,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{AccFormula, ColorSet};
    use crate::fixtures;
    use crate::formula::{Formula, PropId};

    fn arbiter(acc: Acceptance) -> Automaton {
        Automaton {
            hoa: fixtures::arbiter_automaton(),
            acc,
        }
    }

    #[test]
    fn arbiter_witness() {
        let v = is_empty(&arbiter(fixtures::arbiter_acceptance()));
        let l = v.lasso().unwrap();
        assert!(l.prefix.is_empty());
        assert_eq!(l.cycle.len(), 1);
        assert_eq!(l.cycle[0].transition, 0);
        assert_eq!(l.cycle[0].valuation.get(PropId(0)), Some(false));
        assert_eq!(l.cycle[0].valuation.get(PropId(1)), Some(false));
        let r = check_lasso_bound(&arbiter(fixtures::arbiter_acceptance())).unwrap();
        assert_eq!((r.prefix_len, r.cycle_len, r.bound), (0, 1, 64));
    }

    #[test]
    fn unsatisfiable_guards_are_empty() {
        let mut h = Hoa::with_anonymous_props(1, 1, 1);
        let p = Formula::atom(0);
        h.add_transition(0, Formula::and([p.clone(), Formula::not(p)]), 0, 1);
        let a = Automaton {
            hoa: h,
            acc: Acceptance::El(AccFormula::t()),
        };
        assert!(is_empty(&a).is_empty());
    }

    #[test]
    fn reachability_and_safety_witnesses() {
        let phi = Formula::and([Formula::atom(0), Formula::not(Formula::atom(1))]);
        let h = fixtures::sat_automaton(&phi, 2);
        for acc in [
            Acceptance::Reachability(ColorSet::singleton(2)),
            Acceptance::Safety(ColorSet::singleton(2)),
        ] {
            let a = Automaton { hoa: h.clone(), acc };
            let l = is_empty(&a).lasso().cloned().unwrap();
            assert_eq!(l.check(&a), Ok(()));
        }
        // a reachability witness through the sink of an incomplete automaton
        let mut h = Hoa::with_anonymous_props(2, 1, 1);
        h.add_transition(0, Formula::atom(0), 1, 1);
        h.add_transition(1, Formula::True, 1, 2);
        let a = Automaton {
            hoa: h,
            acc: Acceptance::Reachability(ColorSet::singleton(1)),
        };
        assert_eq!(is_empty(&a).lasso().unwrap().check(&a), Ok(()));
    }

    #[test]
    fn fin_on_arbiter() {
        // eventually avoiding color 2 is possible (stay in q1)
        let a = arbiter(Acceptance::El(AccFormula::Fin(ColorSet::singleton(2))));
        assert!(!is_empty(&a).is_empty());
        let a = arbiter(Acceptance::El(AccFormula::and([
            AccFormula::Fin(ColorSet::singleton(1)),
            AccFormula::Inf(ColorSet::singleton(1)),
        ])));
        assert!(is_empty(&a).is_empty());
    }
}
