//! Acceptance and structural transformations.  Every transformation
//! preserves the language; new colors are allocated above the input's
//! index.  Outputs record, per state and per transition, where they came
//! from in the input so that runs can be mapped back.

use thiserror::Error;

use crate::automaton::{
    AccFormula, Acceptance, Automaton, AutomatonError, ColorId, ColorSet, Hoa, StateId, MAX_COLOR,
};
use crate::formula::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("expected a {expected} condition, found {found}")]
    WrongFamily {
        expected: &'static str,
        found: &'static str,
    },
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transformed {
    pub hoa: Hoa,
    pub acc: Acceptance,
    /// Input state per output state (`None` for added states).
    pub state_origin: Vec<Option<StateId>>,
    /// Input transition per output transition (`None` for added ones).
    pub transition_origin: Vec<Option<usize>>,
}

impl Transformed {
    pub fn automaton(&self) -> Automaton {
        Automaton {
            hoa: self.hoa.clone(),
            acc: self.acc.clone(),
        }
    }

    /// Origins of `self` (built from `inner`'s output) expressed in terms
    /// of `inner`'s input.
    pub fn through(mut self, inner: &Transformed) -> Transformed {
        for s in &mut self.state_origin {
            *s = s.and_then(|q| inner.state_origin[q]);
        }
        for t in &mut self.transition_origin {
            *t = t.and_then(|i| inner.transition_origin[i]);
        }
        self
    }
}

/// Incrementally built output automaton.
struct Builder {
    hoa: Hoa,
    state_origin: Vec<Option<StateId>>,
    transition_origin: Vec<Option<usize>>,
}

impl Builder {
    fn new(like: &Hoa, index: u32) -> Builder {
        let mut hoa = Hoa::new(0, like.props.clone(), index);
        hoa.name = like.name.clone();
        Builder {
            hoa,
            state_origin: Vec::new(),
            transition_origin: Vec::new(),
        }
    }

    fn state(&mut self, origin: Option<StateId>, name: Option<String>) -> StateId {
        let q = self.hoa.add_state();
        self.hoa.state_names[q] = name;
        self.state_origin.push(origin);
        q
    }

    fn edge(&mut self, source: StateId, guard: Formula, target: StateId, color: ColorId, origin: Option<usize>) {
        self.hoa.add_transition(source, guard, target, color);
        self.transition_origin.push(origin);
    }

    fn finish(self, acc: Acceptance) -> Transformed {
        Transformed {
            hoa: self.hoa,
            acc,
            state_origin: self.state_origin,
            transition_origin: self.transition_origin,
        }
    }
}

fn state_name(a: &Hoa, q: StateId) -> String {
    a.state_names
        .get(q)
        .cloned()
        .flatten()
        .unwrap_or_else(|| q.to_string())
}

fn fresh(index: u32, extra: usize) -> Result<u32, TransformError> {
    let top = index as usize + extra;
    if top > MAX_COLOR as usize {
        return Err(AutomatonError::BoundExceeded {
            what: "number of colors",
            actual: top,
            limit: MAX_COLOR as usize,
        }
        .into());
    }
    Ok(top as u32)
}

fn wrong(expected: &'static str, acc: &Acceptance) -> TransformError {
    TransformError::WrongFamily {
        expected,
        found: acc.family_name(),
    }
}

/// State-based coloring: states are pairs `(q, c)` with `c` a color leaving
/// `q`; every transition of `(q, c)` carries `c`.  States without outgoing
/// transitions get a `False` self-loop of color 1 first.  The condition is
/// kept.  Output states are ordered by `q`, then `c`.
pub fn to_state_based(a: &Automaton) -> Transformed {
    let hoa = &a.hoa;
    let n = hoa.num_states();
    let outgoing = hoa.outgoing();
    let colors: Vec<Vec<ColorId>> = (0..n)
        .map(|q| {
            let s: ColorSet = outgoing[q].iter().map(|&i| hoa.transitions[i].color).collect();
            if s.is_empty() {
                vec![1]
            } else {
                s.iter().collect()
            }
        })
        .collect();
    let mut b = Builder::new(hoa, hoa.index.max(1));
    let mut ids: Vec<Vec<StateId>> = Vec::with_capacity(n);
    for q in 0..n {
        let row = colors[q]
            .iter()
            .map(|&c| b.state(Some(q), Some(format!("{},{}", state_name(hoa, q), c))))
            .collect();
        ids.push(row);
    }
    for q in 0..n {
        if outgoing[q].is_empty() {
            let s = ids[q][0];
            b.edge(s, Formula::False, s, 1, None);
            continue;
        }
        for (k, &c) in colors[q].iter().enumerate() {
            let s = ids[q][k];
            for &i in &outgoing[q] {
                let t = &hoa.transitions[i];
                if t.color != c {
                    continue;
                }
                for &target in &ids[t.target] {
                    b.edge(s, t.guard.clone(), target, c, Some(i));
                }
            }
        }
    }
    b.hoa.initial = hoa.initial.iter().flat_map(|&q| ids[q].iter().copied()).collect();
    b.finish(a.acc.clone())
}

/// Copies `a` into `b`, recoloring transitions with `recolor`; returns the
/// new state ids.
fn copy_into(
    b: &mut Builder,
    a: &Hoa,
    origin: &dyn Fn(StateId) -> Option<StateId>,
    tag: &str,
    recolor: &dyn Fn(usize) -> ColorId,
) -> Vec<StateId> {
    let ids: Vec<StateId> = (0..a.num_states())
        .map(|q| b.state(origin(q), Some(format!("{}{tag}", state_name(a, q)))))
        .collect();
    for (i, t) in a.transitions.iter().enumerate() {
        b.edge(ids[t.source], t.guard.clone(), ids[t.target], recolor(i), Some(i));
    }
    ids
}

/// Reachability to Büchi.  For a complete input, a sink looping on every
/// color of `R` is added and every `R`-colored transition gets a copy into
/// the sink; the output is Büchi over `R`.  Otherwise a run may not continue
/// after seeing `R`, so the output is a product with a "seen" flag whose
/// flagged half carries the fresh color `d+1`, under Büchi `{d+1}`.
pub fn reach_to_buchi(a: &Automaton) -> Result<Transformed, TransformError> {
    let Acceptance::Reachability(r) = &a.acc else {
        return Err(wrong("reachability", &a.acc));
    };
    let hoa = &a.hoa;
    if hoa.is_complete() {
        let mut b = Builder::new(hoa, hoa.index);
        let ids = copy_into(&mut b, hoa, &|q| Some(q), "", &|i| hoa.transitions[i].color);
        let sink = b.state(None, Some("sink".into()));
        for (i, t) in hoa.transitions.iter().enumerate() {
            if r.contains(t.color) {
                b.edge(ids[t.source], t.guard.clone(), sink, t.color, Some(i));
            }
        }
        for c in r.iter() {
            b.edge(sink, Formula::True, sink, c, None);
        }
        b.hoa.initial = hoa.initial.iter().map(|&q| ids[q]).collect();
        return Ok(b.finish(Acceptance::Buchi(*r)));
    }
    let seen = fresh(hoa.index, 1)?;
    let mut b = Builder::new(hoa, seen);
    let n = hoa.num_states();
    let before: Vec<StateId> = (0..n)
        .map(|q| b.state(Some(q), Some(state_name(hoa, q))))
        .collect();
    let after: Vec<StateId> = (0..n)
        .map(|q| b.state(Some(q), Some(format!("{}'", state_name(hoa, q)))))
        .collect();
    for (i, t) in hoa.transitions.iter().enumerate() {
        let to = if r.contains(t.color) { after[t.target] } else { before[t.target] };
        b.edge(before[t.source], t.guard.clone(), to, t.color, Some(i));
        b.edge(after[t.source], t.guard.clone(), after[t.target], seen, Some(i));
    }
    b.hoa.initial = hoa.initial.iter().map(|&q| before[q]).collect();
    Ok(b.finish(Acceptance::Buchi(ColorSet::singleton(seen))))
}

/// Safety to co-Büchi: every transition colored outside `S` is redirected
/// to a sink looping on the colors outside `S`; the output rejects every
/// run that sees one of them.
pub fn safety_to_cobuchi(a: &Automaton) -> Result<Transformed, TransformError> {
    let Acceptance::Safety(s) = &a.acc else {
        return Err(wrong("safety", &a.acc));
    };
    let hoa = &a.hoa;
    let bad = ColorSet::range(1, hoa.index).difference(*s);
    let mut b = Builder::new(hoa, hoa.index);
    let n = hoa.num_states();
    let ids: Vec<StateId> = (0..n)
        .map(|q| b.state(Some(q), Some(state_name(hoa, q))))
        .collect();
    let sink = b.state(None, Some("sink".into()));
    for (i, t) in hoa.transitions.iter().enumerate() {
        let to = if s.contains(t.color) { ids[t.target] } else { sink };
        b.edge(ids[t.source], t.guard.clone(), to, t.color, Some(i));
    }
    for c in bad.iter() {
        b.edge(sink, Formula::True, sink, c, None);
    }
    b.hoa.initial = hoa.initial.iter().map(|&q| ids[q]).collect();
    Ok(b.finish(Acceptance::CoBuchi(bad)))
}

/// Muller (some set has all of its colors infinitely often) to Streett.
///
/// On the state-based form, one component per set `E`: a waiting copy
/// colored `wait` that may jump into a second copy at any step, and a
/// second copy where each color `c ∈ E` is renamed `b_c` and all other
/// colors `other`.  The Streett pairs `(wait, ∅)`, `(all of the component,
/// {b_c1})` and `(b_cj, b_cj+1)` force leaving the waiting copy and then
/// seeing every `b_c` infinitely often.
pub fn muller_to_streett(a: &Automaton) -> Result<Transformed, TransformError> {
    let Acceptance::Muller(sets) = &a.acc else {
        return Err(wrong("muller", &a.acc));
    };
    let sb = to_state_based(a);
    let h = &sb.hoa;
    let coloring: Vec<ColorId> = h
        .state_coloring()
        .expect("state-based by construction")
        .into_iter()
        .map(|c| c.unwrap_or(1))
        .collect();
    let extra: usize = sets.iter().map(|e| 2 + e.len()).sum();
    let top = fresh(h.index, extra)?;
    let mut b = Builder::new(h, top);
    let mut pairs = Vec::new();
    let mut next = h.index + 1;
    let mut initial = Vec::new();
    for e in sets {
        let wait = next;
        let other = next + 1;
        let named: Vec<ColorId> = e.iter().collect();
        let rename = |c: ColorId| match named.iter().position(|&x| x == c) {
            Some(j) => other + 1 + j as u32,
            None => other,
        };
        let all: ColorSet = (wait..=other + named.len() as u32).collect();
        next = other + named.len() as u32 + 1;
        let first = copy_into(&mut b, h, &|q| sb.state_origin[q], "", &|_| wait);
        let second = copy_into(&mut b, h, &|q| sb.state_origin[q], "'", &|i| {
            rename(coloring[h.transitions[i].source])
        });
        for (i, t) in h.transitions.iter().enumerate() {
            b.edge(first[t.source], t.guard.clone(), second[t.target], wait, Some(i));
        }
        initial.extend(h.initial.iter().map(|&q| first[q]));
        pairs.push((ColorSet::singleton(wait), ColorSet::empty()));
        if !named.is_empty() {
            pairs.push((all.difference(ColorSet::singleton(wait)), ColorSet::singleton(other + 1)));
            for j in 1..named.len() as u32 {
                pairs.push((ColorSet::singleton(other + j), ColorSet::singleton(other + j + 1)));
            }
        }
    }
    b.hoa.initial = initial;
    Ok(b.finish(Acceptance::Streett(pairs)).through(&sb))
}

/// Rabin to Büchi on the state-based form: per pair `(E, F)` the input is
/// copied twice, the first copy may jump into the second, which keeps only
/// the states whose color is outside `F`; second-copy transitions leaving a
/// state colored in `E` get the fresh accepting color.
pub fn rabin_to_buchi(a: &Automaton) -> Result<Transformed, TransformError> {
    let Acceptance::Rabin(pairs) = &a.acc else {
        return Err(wrong("rabin", &a.acc));
    };
    let sb = to_state_based(a);
    let h = &sb.hoa;
    let coloring: Vec<ColorId> = h
        .state_coloring()
        .expect("state-based by construction")
        .into_iter()
        .map(|c| c.unwrap_or(1))
        .collect();
    let good = fresh(h.index, 1)?;
    let mut b = Builder::new(h, good);
    let mut initial = Vec::new();
    for &(e, f) in pairs {
        let first = copy_into(&mut b, h, &|q| sb.state_origin[q], "", &|i| h.transitions[i].color);
        let keep: Vec<bool> = coloring.iter().map(|&c| !f.contains(c)).collect();
        let mut second = vec![usize::MAX; h.num_states()];
        for q in 0..h.num_states() {
            if keep[q] {
                second[q] = b.state(sb.state_origin[q], Some(format!("{}'", state_name(h, q))));
            }
        }
        for (i, t) in h.transitions.iter().enumerate() {
            if !keep[t.target] {
                continue;
            }
            b.edge(first[t.source], t.guard.clone(), second[t.target], t.color, Some(i));
            if keep[t.source] {
                let c = if e.contains(t.color) { good } else { t.color };
                b.edge(second[t.source], t.guard.clone(), second[t.target], c, Some(i));
            }
        }
        initial.extend(h.initial.iter().map(|&q| first[q]));
    }
    b.hoa.initial = initial;
    Ok(b.finish(Acceptance::Buchi(ColorSet::singleton(good))).through(&sb))
}

/// Emerson-Lei to Büchi.  Per disjunct of the DNF (`Inf` sets `I_1..I_m`,
/// `Fin` colors `C`): a round-robin counter over the `Inf` sets, the fresh
/// accepting color marking the step that completes a round; if `C` is
/// nonempty, a first copy without counter may jump into the counter copy,
/// which has no `C`-colored transitions.  Disjuncts are united disjointly.
pub fn el_to_buchi(a: &Automaton) -> Result<Transformed, TransformError> {
    let Some(alpha) = a.acc.to_el() else {
        return Err(wrong("prefix-independent", &a.acc));
    };
    el_formula_to_buchi(&a.hoa, &alpha)
}

pub fn el_formula_to_buchi(hoa: &Hoa, alpha: &AccFormula) -> Result<Transformed, TransformError> {
    let good = fresh(hoa.index, 1)?;
    let mut b = Builder::new(hoa, good);
    let n = hoa.num_states();
    let mut initial = Vec::new();
    for conj in alpha.dnf() {
        if conj.inf.iter().any(|s| s.is_empty()) {
            continue;
        }
        let m = conj.inf.len().max(1);
        let fin = conj.fin;
        let waiting = if fin.is_empty() {
            None
        } else {
            let ids = copy_into(&mut b, hoa, &|q| Some(q), "", &|i| hoa.transitions[i].color);
            Some(ids)
        };
        let counter: Vec<Vec<StateId>> = (0..n)
            .map(|q| {
                (0..m)
                    .map(|j| b.state(Some(q), Some(format!("{}#{j}", state_name(hoa, q)))))
                    .collect()
            })
            .collect();
        for (i, t) in hoa.transitions.iter().enumerate() {
            if fin.contains(t.color) {
                continue;
            }
            for j in 0..m {
                let (next, wrap) = if conj.inf.is_empty() {
                    (0, true)
                } else if conj.inf[j].contains(t.color) {
                    ((j + 1) % m, j + 1 == m)
                } else {
                    (j, false)
                };
                let c = if wrap { good } else { t.color };
                b.edge(counter[t.source][j], t.guard.clone(), counter[t.target][next], c, Some(i));
            }
            if let Some(w) = &waiting {
                b.edge(w[t.source], t.guard.clone(), counter[t.target][0], t.color, Some(i));
            }
        }
        match &waiting {
            Some(w) => initial.extend(hoa.initial.iter().map(|&q| w[q])),
            None => initial.extend(hoa.initial.iter().map(|&q| counter[q][0])),
        }
    }
    b.hoa.initial = initial;
    Ok(b.finish(Acceptance::Buchi(ColorSet::singleton(good))))
}

/// Any condition to an equivalent Büchi automaton, going through the named
/// constructions where they apply.
pub fn to_buchi(a: &Automaton) -> Result<Transformed, TransformError> {
    match &a.acc {
        Acceptance::Buchi(_) => {
            let n = a.hoa.num_states();
            Ok(Transformed {
                hoa: a.hoa.clone(),
                acc: a.acc.clone(),
                state_origin: (0..n).map(Some).collect(),
                transition_origin: (0..a.hoa.transitions.len()).map(Some).collect(),
            })
        }
        Acceptance::Reachability(_) => reach_to_buchi(a),
        Acceptance::Safety(_) => {
            let co = safety_to_cobuchi(a)?;
            Ok(el_to_buchi(&co.automaton())?.through(&co))
        }
        Acceptance::Rabin(_) => rabin_to_buchi(a),
        Acceptance::Muller(_) => {
            let st = muller_to_streett(a)?;
            Ok(el_to_buchi(&st.automaton())?.through(&st))
        }
        _ => el_to_buchi(a),
    }
}
