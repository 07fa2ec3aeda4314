//! Language inclusion at desk scale: both sides are converted to Büchi and
//! expanded over letters, the right side is complemented with level
//! rankings, and the product with the left side is checked for emptiness.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fmt::Write as _;

use crate::automaton::{Acceptance, Automaton, AutomatonError, ColorSet, Conjunct, ExplicitAutomaton, Hoa};
use crate::bounds::Bounds;
use crate::formula::{Formula, Valuation};
use crate::graph::ColorGraph;
use crate::transforms::to_buchi;

use super::emptiness::{is_empty, Verdict};
use super::lasso::{Lasso, LassoStep};
use super::AnalysisError;

/// An ultimately periodic word `prefix · cycle^ω`; bit `i` of a letter is
/// proposition `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LassoWord {
    pub prefix: Vec<u64>,
    pub cycle: Vec<u64>,
}

impl LassoWord {
    /// Letter at position `i` of the infinite word.
    pub fn letter(&self, i: usize) -> u64 {
        match i < self.prefix.len() {
            true => self.prefix[i],
            false => self.cycle[(i - self.prefix.len()) % self.cycle.len()],
        }
    }

    pub fn format(&self) -> String {
        let part = |ls: &[u64]| {
            let mut s = String::new();
            for (k, l) in ls.iter().enumerate() {
                if k > 0 {
                    s.push(' ');
                }
                let _ = write!(s, "{l}");
            }
            s
        };
        format!("{} | {}", part(&self.prefix), part(&self.cycle)).trim_start().to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Inclusion {
    Included,
    /// `word` is accepted by the left side (through `run`) and rejected by
    /// the right side.
    NotIncluded { word: LassoWord, run: Lasso },
}

impl Inclusion {
    pub fn holds(&self) -> bool {
        matches!(self, Inclusion::Included)
    }
}

/// An accepting run of `a` on `w`, if `a` accepts it.  The run is found as
/// an accepting lasso of the product of `a` with the positions of `w`.
pub fn word_run(a: &Automaton, w: &LassoWord) -> Option<Lasso> {
    assert!(!w.cycle.is_empty(), "a lasso word needs a nonempty cycle");
    let hoa = &a.hoa;
    let len = w.prefix.len() + w.cycle.len();
    let next = |pos: usize| if pos + 1 < len { pos + 1 } else { w.prefix.len() };
    let id = |q: usize, pos: usize| q * len + pos;
    let mut p = Hoa::with_anonymous_props(hoa.num_states() * len, 0, hoa.index);
    p.initial = hoa.initial.iter().map(|&q| id(q, 0)).collect();
    let mut origin = Vec::new();
    for (i, t) in hoa.transitions.iter().enumerate() {
        for pos in 0..len {
            if t.guard.eval_bits(w.letter(pos)) {
                p.add_transition(id(t.source, pos), Formula::True, id(t.target, next(pos)), t.color);
                origin.push((i, pos));
            }
        }
    }
    let prod = Automaton {
        hoa: p,
        acc: a.acc.clone(),
    };
    let Verdict::Nonempty(l) = is_empty(&prod) else {
        return None;
    };
    let props = hoa.prop_ids();
    let map = |steps: &[LassoStep]| -> Vec<LassoStep> {
        steps
            .iter()
            .map(|s| {
                let (t, pos) = origin[s.transition];
                LassoStep {
                    transition: t,
                    valuation: Valuation::from_bits(&props, w.letter(pos)),
                }
            })
            .collect()
    };
    Some(Lasso {
        prefix: map(&l.prefix),
        cycle: map(&l.cycle),
    })
}

const NONE: u8 = u8::MAX;

/// A state of the complement.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum RankState {
    /// Before the ranking is guessed: the states the right side can be in.
    Subset(u64),
    /// A tight level ranking (`NONE` outside the current set; the largest
    /// rank is odd and every odd rank below it is used), the even rank
    /// `level` under inspection and the states of that rank still owing a
    /// decrease.
    Ranked { ranks: Vec<u8>, level: u8, owing: u64 },
    /// The right side has no run left.
    Dead,
}

impl RankState {
    fn accepting(&self) -> bool {
        match self {
            RankState::Subset(_) => false,
            RankState::Ranked { owing, .. } => *owing == 0,
            RankState::Dead => true,
        }
    }
}

/// Rank-based complement of a transition-based Büchi automaton with tight
/// rankings and a single even rank checked at a time, explored on the fly.
/// The maximal rank is fixed when the ranking is guessed.
struct Complement {
    n: usize,
    /// Successors per state and letter, with the acceptance flag of the
    /// edge; states without an accepting future are left out.
    succ: Vec<Vec<Vec<(usize, bool)>>>,
}

/// States from which some run visits an accepting edge infinitely often.
fn productive(n: usize, edges: &[(usize, usize, bool)]) -> Vec<bool> {
    let mut reach = vec![vec![false; n]; n];
    for (q, row) in reach.iter_mut().enumerate() {
        let mut stack = vec![q];
        while let Some(x) = stack.pop() {
            for &(s, t, _) in edges {
                if s == x && !row[t] {
                    row[t] = true;
                    stack.push(t);
                }
            }
        }
    }
    let on_cycle: Vec<usize> = edges
        .iter()
        .filter(|&&(s, t, acc)| acc && reach[t][s])
        .map(|e| e.0)
        .collect();
    (0..n).map(|q| on_cycle.iter().any(|&x| x == q || reach[q][x])).collect()
}

impl Complement {
    fn new(b: &ExplicitAutomaton, acc: ColorSet) -> Complement {
        let letters = b.alphabet_size() as usize;
        let edges: Vec<(usize, usize, bool)> = b
            .transitions
            .iter()
            .map(|t| (t.source, t.target, acc.contains(t.color)))
            .collect();
        let useful = productive(b.num_states, &edges);
        let mut succ = vec![vec![Vec::new(); letters]; b.num_states];
        for t in &b.transitions {
            if useful[t.source] && useful[t.target] {
                succ[t.source][t.letter as usize].push((t.target, acc.contains(t.color)));
            }
        }
        Complement { n: b.num_states, succ }
    }

    fn initial(&self, init: &[usize], useful: impl Fn(usize) -> bool) -> RankState {
        let set = init.iter().filter(|&&q| useful(q)).fold(0u64, |m, &q| m | 1 << q);
        match set {
            0 => RankState::Dead,
            _ => RankState::Subset(set),
        }
    }

    fn useful(&self, q: usize) -> bool {
        self.succ[q].iter().any(|l| !l.is_empty())
    }

    /// All successors on `letter`.
    fn successors(&self, s: &RankState, letter: usize, out: &mut Vec<RankState>) {
        out.clear();
        match s {
            RankState::Dead => out.push(RankState::Dead),
            RankState::Subset(set) => {
                let next = (0..self.n)
                    .filter(|q| set >> q & 1 == 1)
                    .flat_map(|q| self.succ[q][letter].iter())
                    .fold(0u64, |m, &(t, _)| m | 1 << t);
                if next == 0 {
                    out.push(RankState::Dead);
                    return;
                }
                out.push(RankState::Subset(next));
                let live: Vec<usize> = (0..self.n).filter(|q| next >> q & 1 == 1).collect();
                for k in 1..=live.len() {
                    let top = (2 * k - 1) as u8;
                    let bound = vec![top; self.n];
                    tight_rankings(self.n, &live, &bound, top, &mut |ranks| {
                        out.push(RankState::Ranked {
                            ranks: ranks.to_vec(),
                            level: 0,
                            owing: 0,
                        })
                    });
                }
            }
            RankState::Ranked { ranks, level, owing } => {
                let top = ranks.iter().copied().filter(|&r| r != NONE).max().expect("ranked states are nonempty");
                // an accepting edge leaving an odd rank forces a decrease
                let mut bound = vec![NONE; self.n];
                let mut from_owing = 0u64;
                for q in 0..self.n {
                    let r = ranks[q];
                    if r == NONE {
                        continue;
                    }
                    for &(t, acc) in &self.succ[q][letter] {
                        let b = if acc && r % 2 == 1 { r - 1 } else { r };
                        bound[t] = bound[t].min(b);
                        if owing >> q & 1 == 1 {
                            from_owing |= 1 << t;
                        }
                    }
                }
                let live: Vec<usize> = (0..self.n).filter(|&q| bound[q] != NONE).collect();
                if live.is_empty() {
                    out.push(RankState::Dead);
                    return;
                }
                tight_rankings(self.n, &live, &bound, top, &mut |next| {
                    let with = |l: u8| live.iter().filter(|&&q| next[q] == l).fold(0u64, |m, &q| m | 1 << q);
                    let (level, owing) = match *owing {
                        0 => {
                            let l = (level + 2) % (top + 1);
                            (l, with(l))
                        }
                        _ => (*level, with(*level) & from_owing),
                    };
                    out.push(RankState::Ranked {
                        ranks: next.to_vec(),
                        level,
                        owing,
                    })
                });
            }
        }
    }
}

/// Calls `emit` with every ranking of `live` below `bound` whose odd ranks
/// are exactly `1, 3, ..., top`.
fn tight_rankings(n: usize, live: &[usize], bound: &[u8], top: u8, emit: &mut dyn FnMut(&[u8])) {
    fn go(
        live: &[usize],
        bound: &[u8],
        top: u8,
        k: usize,
        ranks: &mut Vec<u8>,
        missing: u64,
        emit: &mut dyn FnMut(&[u8]),
    ) {
        if missing.count_ones() as usize > live.len() - k {
            return;
        }
        if k == live.len() {
            emit(ranks);
            return;
        }
        let q = live[k];
        for r in 0..=bound[q].min(top) {
            ranks[q] = r;
            let m = if r % 2 == 1 { missing & !(1 << (r / 2)) } else { missing };
            go(live, bound, top, k + 1, ranks, m, emit);
        }
        ranks[q] = NONE;
    }
    let odd = (top as u32).div_ceil(2);
    let missing = if odd >= 64 { u64::MAX } else { (1u64 << odd) - 1 };
    let mut ranks = vec![NONE; n];
    go(live, bound, top, 0, &mut ranks, missing, emit);
}

struct Product {
    rank_ids: HashMap<RankState, usize>,
    rank_states: Vec<RankState>,
    ids: HashMap<(usize, usize), usize>,
    nodes: Vec<(usize, usize)>,
    g: ColorGraph,
    limit: usize,
}

impl Product {
    fn rank(&mut self, r: RankState) -> usize {
        if let Some(&id) = self.rank_ids.get(&r) {
            return id;
        }
        self.rank_states.push(r.clone());
        self.rank_ids.insert(r, self.rank_states.len() - 1);
        self.rank_states.len() - 1
    }

    fn node(&mut self, qa: usize, rid: usize) -> Result<usize, AnalysisError> {
        if let Some(&v) = self.ids.get(&(qa, rid)) {
            return Ok(v);
        }
        if self.nodes.len() >= self.limit {
            return Err(AutomatonError::BoundExceeded {
                what: "states of the inclusion product",
                actual: self.nodes.len() + 1,
                limit: self.limit,
            }
            .into());
        }
        self.nodes.push((qa, rid));
        self.ids.insert((qa, rid), self.nodes.len() - 1);
        Ok(self.g.add_node())
    }
}

fn buchi_set(acc: &Acceptance) -> ColorSet {
    match acc {
        Acceptance::Buchi(b) => *b,
        _ => unreachable!("to_buchi returns a Büchi condition"),
    }
}

/// Whether `L(a) ⊆ L(b)`, with a counterexample when not.
///
/// Both automata must share their propositions, at most
/// `bounds.inclusion_props` of them; `b` may have at most
/// `bounds.inclusion_states` states after the conversion to Büchi, and the
/// explored product at most `bounds.product_states` states.
pub fn included(a: &Automaton, b: &Automaton, bounds: &Bounds) -> Result<Inclusion, AnalysisError> {
    if a.hoa.props != b.hoa.props {
        return Err(AnalysisError::PropositionMismatch);
    }
    let props = a.hoa.num_props();
    if props > bounds.inclusion_props {
        return Err(AutomatonError::BoundExceeded {
            what: "propositions of an inclusion check",
            actual: props,
            limit: bounds.inclusion_props,
        }
        .into());
    }
    let ta = to_buchi(a)?;
    let tb = to_buchi(b)?;
    // complement states keep sets of right-hand states in 64-bit masks
    let limit = bounds.inclusion_states.min(64);
    if tb.hoa.num_states() > limit {
        return Err(AutomatonError::BoundExceeded {
            what: "states of the right-hand side after conversion to Büchi",
            actual: tb.hoa.num_states(),
            limit,
        }
        .into());
    }
    let ea = ta.hoa.expand_explicit(bounds.inclusion_props)?;
    let eb = tb.hoa.expand_explicit(bounds.inclusion_props)?;
    let acc_a = buchi_set(&ta.acc);
    let comp = Complement::new(&eb, buchi_set(&tb.acc));
    let out_a = ea.outgoing();

    // product of the left side with the complement, explored breadth first
    let mut p = Product {
        rank_ids: HashMap::new(),
        rank_states: Vec::new(),
        ids: HashMap::new(),
        nodes: Vec::new(),
        g: ColorGraph::new(0),
        limit: bounds.product_states,
    };
    let init_rank = p.rank(comp.initial(&eb.initial, |q| comp.useful(q)));
    let initial = ea
        .initial
        .iter()
        .map(|&qa| p.node(qa, init_rank))
        .collect::<Result<Vec<_>, _>>()?;
    let mut letters: Vec<u64> = Vec::new();
    let mut cache: HashMap<(usize, u64), Vec<usize>> = HashMap::new();
    let mut buf = Vec::new();
    let mut v = 0;
    while v < p.nodes.len() {
        let (qa, rid) = p.nodes[v];
        let owing_empty = p.rank_states[rid].accepting();
        for &i in &out_a[qa] {
            let t = ea.transitions[i];
            if let Entry::Vacant(e) = cache.entry((rid, t.letter)) {
                comp.successors(&p.rank_states[rid], t.letter as usize, &mut buf);
                e.insert(buf.drain(..).map(|r| p.rank(r)).collect());
            }
            let color = 1 + u32::from(acc_a.contains(t.color)) + 2 * u32::from(owing_empty);
            for &r in &cache[&(rid, t.letter)] {
                let w = p.node(t.target, r)?;
                p.g.add_edge(v, w, color);
                letters.push(t.letter);
            }
        }
        v += 1;
    }
    let g = p.g;
    let dnf = [Conjunct {
        inf: vec![ColorSet::from_iter([2, 4]), ColorSet::from_iter([3, 4])],
        fin: ColorSet::empty(),
    }];
    let Some(l) = g.find_lasso(&initial, &dnf) else {
        return Ok(Inclusion::Included);
    };
    let word = LassoWord {
        prefix: l.prefix.iter().map(|&e| letters[e]).collect(),
        cycle: l.cycle.iter().map(|&e| letters[e]).collect(),
    };
    let run = word_run(a, &word).ok_or(AnalysisError::Internal("counterexample rejected by the left side"))?;
    Ok(Inclusion::NotIncluded { word, run })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn arbiter() -> Automaton {
        Automaton {
            hoa: fixtures::arbiter_automaton(),
            acc: fixtures::arbiter_acceptance(),
        }
    }

    #[test]
    fn reflexive_and_universal() {
        let a = arbiter();
        assert!(included(&a, &a, &Bounds::default()).unwrap().holds());
        let mut u = fixtures::universal_automaton(2);
        u.props = a.hoa.props.clone();
        let u = Automaton {
            hoa: u,
            acc: Acceptance::Buchi(ColorSet::singleton(1)),
        };
        assert!(included(&a, &u, &Bounds::default()).unwrap().holds());
        match included(&u, &a, &Bounds::default()).unwrap() {
            Inclusion::Included => panic!("the arbiter is not universal"),
            Inclusion::NotIncluded { word, run } => {
                assert_eq!(run.check(&u), Ok(()));
                assert!(word_run(&a, &word).is_none());
            }
        }
    }

    #[test]
    fn word_membership() {
        let a = arbiter();
        // r forever without a grant is rejected; a granted request is accepted
        let w = LassoWord {
            prefix: vec![],
            cycle: vec![0b01],
        };
        assert!(word_run(&a, &w).is_none());
        let w = LassoWord {
            prefix: vec![0b01, 0b10],
            cycle: vec![0b00],
        };
        let run = word_run(&a, &w).unwrap();
        assert_eq!(run.check(&a), Ok(()));
        assert_eq!(w.format(), "1 2 | 0");
    }

    #[test]
    fn proposition_mismatch() {
        let a = arbiter();
        let b = Automaton {
            hoa: fixtures::universal_automaton(2),
            acc: Acceptance::Buchi(ColorSet::singleton(1)),
        };
        assert_eq!(included(&a, &b, &Bounds::default()), Err(AnalysisError::PropositionMismatch));
    }
}
