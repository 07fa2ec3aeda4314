//! Brute-force reference procedures.  None of them calls into the
//! algorithms they are used to check: formulas are evaluated by truth
//! table, automata are expanded letter by letter, acceptance is decided
//! by enumerating color sets, and games are solved on fully expanded
//! move graphs with their own appearance records and parity solver.

use std::collections::{BTreeSet, HashMap, VecDeque};

use hanoi::analysis::{Lasso, LassoWord};
use hanoi::games::{Hog, Player, Qbf2};
use hanoi::symbolic::{Cmp, FGame, IntGuard, IntOracle};
use hanoi::{AccFormula, Acceptance, Automaton, ColorId, ColorSet, Formula, Hoa};

// ---- propositional ----

/// Value of `f` under the assignment with bit `i` for atom `i`.
pub fn eval_formula(f: &Formula, bits: u64) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(p) => bits >> p.0 & 1 == 1,
        Formula::Not(g) => !eval_formula(g, bits),
        Formula::And(gs) => gs.iter().all(|g| eval_formula(g, bits)),
        Formula::Or(gs) => gs.iter().any(|g| eval_formula(g, bits)),
    }
}

pub fn truth_table_sat(f: &Formula, vars: usize) -> bool {
    (0..1u64 << vars).any(|b| eval_formula(f, b))
}

pub fn qbf_true(q: &Qbf2) -> bool {
    let nx = q.universal.len();
    let ny = q.existential.len();
    (0..1u64 << nx).all(|x| (0..1u64 << ny).any(|y| eval_formula(&q.matrix, x | y << nx)))
}

// ---- acceptance ----

fn el_holds(f: &AccFormula, inf: ColorSet) -> bool {
    match f {
        AccFormula::Inf(s) => s.iter().any(|c| inf.contains(c)),
        AccFormula::Fin(s) => s.iter().all(|c| !inf.contains(c)),
        AccFormula::And(fs) => fs.iter().all(|g| el_holds(g, inf)),
        AccFormula::Or(fs) => fs.iter().any(|g| el_holds(g, inf)),
    }
}

/// Whether a run with colors `elem` overall and `inf` infinitely often is
/// accepted.
pub fn acc_holds(acc: &Acceptance, elem: ColorSet, inf: ColorSet) -> bool {
    let hits = |s: &ColorSet, on: ColorSet| s.iter().any(|c| on.contains(c));
    match acc {
        Acceptance::Reachability(r) => hits(r, elem),
        Acceptance::Safety(s) => elem.iter().all(|c| s.contains(c)),
        Acceptance::El(f) => el_holds(f, inf),
        Acceptance::Buchi(b) => hits(b, inf),
        Acceptance::CoBuchi(b) => !hits(b, inf),
        Acceptance::Parity { colors } => {
            let top = inf.iter().filter(|&c| c >= 1 && c <= *colors).last();
            matches!(top, Some(c) if c % 2 == 0)
        }
        Acceptance::Rabin(pairs) => pairs.iter().any(|(e, f)| hits(e, inf) && !hits(f, inf)),
        Acceptance::Streett(pairs) => pairs.iter().all(|(e, f)| !hits(e, inf) || hits(f, inf)),
        Acceptance::Muller(sets) => sets.iter().any(|s| s.iter().all(|c| inf.contains(c))),
    }
}

fn prefix_dependent(acc: &Acceptance) -> bool {
    matches!(acc, Acceptance::Reachability(_) | Acceptance::Safety(_))
}

// ---- explicit graphs ----

/// The color as a set; the neutral color 0 counts as no color.
fn tint(c: ColorId) -> ColorSet {
    if c == 0 {
        ColorSet::empty()
    } else {
        ColorSet::singleton(c)
    }
}

/// A graph whose edges carry sets of colors: single transitions, or whole
/// runs over a word (a "profile").
#[derive(Clone, Debug, Default)]
pub struct SetGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize, ColorSet)>,
}

impl SetGraph {
    fn reach(&self, from: &[usize], ok: &dyn Fn(&ColorSet) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::new();
        for &s in from {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for (p, q, c) in &self.edges {
                if *p == u && ok(c) && !seen[*q] {
                    seen[*q] = true;
                    queue.push_back(*q);
                }
            }
        }
        seen
    }

    /// Nodes with an infinite path over allowed edges.
    fn infinite(&self, ok: &dyn Fn(&ColorSet) -> bool) -> Vec<bool> {
        let mut alive = vec![true; self.n];
        loop {
            let next: Vec<bool> = (0..self.n)
                .map(|u| alive[u] && self.edges.iter().any(|(p, q, c)| *p == u && alive[*q] && ok(c)))
                .collect();
            if next == alive {
                return alive;
            }
            alive = next;
        }
    }

    /// Whether some run from `starts` (node, colors already seen) is
    /// accepted.
    pub fn accepts_from(&self, starts: &[(usize, ColorSet)], acc: &Acceptance) -> bool {
        let any = |_: &ColorSet| true;
        match acc {
            Acceptance::Reachability(r) => {
                let inf = self.infinite(&any);
                starts.iter().any(|&(q0, pre)| {
                    if pre.intersects(*r) {
                        return inf[q0];
                    }
                    let seen = self.reach(&[q0], &any);
                    self.edges.iter().any(|(p, q, c)| seen[*p] && c.intersects(*r) && inf[*q])
                })
            }
            Acceptance::Safety(s) => {
                let ok = |c: &ColorSet| c.is_subset(*s);
                let inf = self.infinite(&ok);
                starts.iter().any(|&(q0, pre)| pre.is_subset(*s) && inf[q0])
            }
            _ => {
                let from: Vec<usize> = starts.iter().map(|s| s.0).collect();
                let reachable = self.reach(&from, &any);
                let all: ColorSet = self.edges.iter().fold(ColorSet::empty(), |a, e| a.union(e.2));
                all.subsets().any(|d| acc_holds(acc, d, d) && self.has_component(&reachable, d))
            }
        }
    }

    /// A reachable strongly connected set over edges inside `d` whose
    /// internal edges cover `d` exactly.
    fn has_component(&self, reachable: &[bool], d: ColorSet) -> bool {
        let ok = |c: &ColorSet| c.is_subset(d);
        let closure: Vec<Vec<bool>> = (0..self.n)
            .map(|u| {
                let starts: Vec<usize> = self
                    .edges
                    .iter()
                    .filter(|(p, _, c)| *p == u && ok(c))
                    .map(|e| e.1)
                    .collect();
                self.reach(&starts, &ok)
            })
            .collect();
        (0..self.n).filter(|&u| reachable[u] && closure[u][u]).any(|u| {
            let inside = |x: usize| closure[u][x] && closure[x][u];
            let covered = self
                .edges
                .iter()
                .filter(|(p, q, c)| ok(c) && inside(*p) && inside(*q))
                .fold(ColorSet::empty(), |a, e| a.union(e.2));
            covered == d
        })
    }
}

/// The transition graph with every guard checked against every letter.
pub fn expand(h: &Hoa) -> SetGraph {
    let letters = 1u64 << h.props.len();
    let edges = h
        .transitions
        .iter()
        .filter(|t| (0..letters).any(|l| eval_formula(&t.guard, l)))
        .map(|t| (t.source, t.target, tint(t.color)))
        .collect();
    SetGraph {
        n: h.num_states(),
        edges,
    }
}

pub fn explicit_nonempty(a: &Automaton) -> bool {
    let starts: Vec<(usize, ColorSet)> = a.hoa.initial.iter().map(|&q| (q, ColorSet::empty())).collect();
    expand(&a.hoa).accepts_from(&starts, &a.acc)
}

// ---- words ----

type Profile = BTreeSet<(usize, usize, ColorSet)>;

fn letter_profile(h: &Hoa, letter: u64) -> Profile {
    h.transitions
        .iter()
        .filter(|t| eval_formula(&t.guard, letter))
        .map(|t| (t.source, t.target, tint(t.color)))
        .collect()
}

fn compose(a: &Profile, b: &Profile) -> Profile {
    let mut out = Profile::new();
    for &(p, q, c) in a {
        for &(q2, r, c2) in b.range((q, 0, ColorSet::empty())..) {
            if q2 != q {
                break;
            }
            out.insert((p, r, c.union(c2)));
        }
    }
    out
}

/// Where the runs of `a` can be after reading `u`, with the colors seen
/// (kept only for conditions that look at them).
fn starts_after(a: &Automaton, u: &[u64]) -> BTreeSet<(usize, ColorSet)> {
    let keep = prefix_dependent(&a.acc);
    let mut cur: BTreeSet<(usize, ColorSet)> = a.hoa.initial.iter().map(|&q| (q, ColorSet::empty())).collect();
    for &l in u {
        let mut next = BTreeSet::new();
        for t in &a.hoa.transitions {
            if !eval_formula(&t.guard, l) {
                continue;
            }
            for &(q, c) in cur.range((t.source, ColorSet::empty())..) {
                if q != t.source {
                    break;
                }
                let c = if keep { c.union(tint(t.color)) } else { c };
                next.insert((t.target, c));
            }
        }
        cur = next;
    }
    cur
}

fn word_profile(h: &Hoa, v: &[u64]) -> Profile {
    let mut p = letter_profile(h, v[0]);
    for &l in &v[1..] {
        p = compose(&p, &letter_profile(h, l));
    }
    p
}

fn accepts_parts(a: &Automaton, starts: &BTreeSet<(usize, ColorSet)>, p: &Profile) -> bool {
    let g = SetGraph {
        n: a.hoa.num_states(),
        edges: p.iter().copied().collect(),
    };
    let starts: Vec<(usize, ColorSet)> = starts.iter().copied().collect();
    g.accepts_from(&starts, &a.acc)
}

/// Whether `a` accepts `u·v^ω`.
pub fn accepts_word(a: &Automaton, w: &LassoWord) -> bool {
    assert!(!w.cycle.is_empty());
    accepts_parts(a, &starts_after(a, &w.prefix), &word_profile(&a.hoa, &w.cycle))
}

/// Every word over `letters` letters of length `lo..=hi`.
fn words(letters: u64, lo: usize, hi: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<u64>> = vec![Vec::new()];
    for len in 0..=hi {
        if len >= lo {
            out.extend(layer.iter().cloned());
        }
        if len == hi {
            break;
        }
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..letters).map(move |l| {
                    let mut x = w.clone();
                    x.push(l);
                    x
                })
            })
            .collect();
    }
    out
}

struct Interner<T: std::hash::Hash + Eq> {
    ids: HashMap<T, usize>,
}

impl<T: std::hash::Hash + Eq> Interner<T> {
    fn new() -> Self {
        Interner { ids: HashMap::new() }
    }

    fn id(&mut self, t: T) -> usize {
        let n = self.ids.len();
        *self.ids.entry(t).or_insert(n)
    }
}

/// Searches all words `u·v^ω` with `|u| ≤ k`, `1 ≤ |v| ≤ k` for one where
/// `pred(a accepts, b accepts)` holds.  Words are grouped by the runs they
/// induce, so each group is decided once.
pub fn find_lasso_word(
    a: &Automaton,
    b: &Automaton,
    k: usize,
    pred: &dyn Fn(bool, bool) -> bool,
) -> Option<LassoWord> {
    assert_eq!(a.hoa.props.len(), b.hoa.props.len(), "automata over different alphabets");
    let letters = 1u64 << a.hoa.props.len();
    let (mut sa, mut sb) = (Interner::new(), Interner::new());
    let (mut pa, mut pb) = (Interner::new(), Interner::new());
    let mut starts_a = Vec::new();
    let mut starts_b = Vec::new();
    let mut u_classes: HashMap<(usize, usize), Vec<u64>> = HashMap::new();
    for u in words(letters, 0, k) {
        let (x, y) = (starts_after(a, &u), starts_after(b, &u));
        let (ix, iy) = (sa.id(x.clone()), sb.id(y.clone()));
        if ix == starts_a.len() {
            starts_a.push(x);
        }
        if iy == starts_b.len() {
            starts_b.push(y);
        }
        u_classes.entry((ix, iy)).or_insert(u);
    }
    let mut prof_a = Vec::new();
    let mut prof_b = Vec::new();
    let mut v_classes: HashMap<(usize, usize), Vec<u64>> = HashMap::new();
    for v in words(letters, 1, k) {
        let (x, y) = (word_profile(&a.hoa, &v), word_profile(&b.hoa, &v));
        let (ix, iy) = (pa.id(x.clone()), pb.id(y.clone()));
        if ix == prof_a.len() {
            prof_a.push(x);
        }
        if iy == prof_b.len() {
            prof_b.push(y);
        }
        v_classes.entry((ix, iy)).or_insert(v);
    }
    let mut memo_a: HashMap<(usize, usize), bool> = HashMap::new();
    let mut memo_b: HashMap<(usize, usize), bool> = HashMap::new();
    let mut us: Vec<_> = u_classes.into_iter().collect();
    let mut vs: Vec<_> = v_classes.into_iter().collect();
    us.sort_by(|x, y| (x.1.len(), &x.1).cmp(&(y.1.len(), &y.1)));
    vs.sort_by(|x, y| (x.1.len(), &x.1).cmp(&(y.1.len(), &y.1)));
    for ((ua, ub), u) in &us {
        for ((va, vb), v) in &vs {
            let x = *memo_a
                .entry((*ua, *va))
                .or_insert_with(|| accepts_parts(a, &starts_a[*ua], &prof_a[*va]));
            let y = *memo_b
                .entry((*ub, *vb))
                .or_insert_with(|| accepts_parts(b, &starts_b[*ub], &prof_b[*vb]));
            if pred(x, y) {
                return Some(LassoWord {
                    prefix: u.clone(),
                    cycle: v.clone(),
                });
            }
        }
    }
    None
}

/// Validity and acceptance of a lasso, checked step by step.
pub fn check_lasso(a: &Automaton, l: &Lasso) -> Result<(), String> {
    let h = &a.hoa;
    if l.cycle.is_empty() {
        return Err("empty cycle".into());
    }
    let steps: Vec<_> = l.prefix.iter().chain(&l.cycle).collect();
    let mut at: Option<usize> = None;
    let (mut elem, mut inf) = (ColorSet::empty(), ColorSet::empty());
    for (k, s) in steps.iter().enumerate() {
        let t = h.transitions.get(s.transition).ok_or("no such transition")?;
        match at {
            None if !h.initial.contains(&t.source) => return Err("does not start initially".into()),
            Some(q) if q != t.source => return Err(format!("step {k} is not connected")),
            _ => {}
        }
        let bits = (0..h.props.len()).fold(0u64, |b, i| match s.valuation.get(hanoi::PropId(i as u32)) {
            Some(true) => b | 1 << i,
            Some(false) => b,
            None => b,
        });
        if (0..h.props.len()).any(|i| s.valuation.get(hanoi::PropId(i as u32)).is_none()) {
            return Err(format!("step {k} has a partial valuation"));
        }
        if !eval_formula(&t.guard, bits) {
            return Err(format!("step {k} violates its guard"));
        }
        elem = elem.union(tint(t.color));
        if k >= l.prefix.len() {
            inf = inf.union(tint(t.color));
        }
        at = Some(t.target);
    }
    if at != Some(h.transitions[l.cycle[0].transition].source) {
        return Err("cycle not closed".into());
    }
    if !acc_holds(&a.acc, elem, inf) {
        return Err("not accepting".into());
    }
    Ok(())
}

// ---- games ----

/// A game fully expanded over valuations: at an arena vertex In picks one
/// of `choices`, then Out picks a successor from it.
#[derive(Clone, Debug)]
pub struct ExplicitGame {
    pub color: Vec<ColorId>,
    pub choices: Vec<Vec<Vec<usize>>>,
    pub initial: usize,
}

/// Builds the arena over `(state, color of the last transition)` from a
/// successor function `step(q, in_choice, out_choice) -> (target, color)`.
fn expand_game(
    initial: usize,
    ins: u64,
    outs: u64,
    step: &dyn Fn(usize, u64, u64) -> (usize, ColorId),
) -> ExplicitGame {
    let mut ids: HashMap<(usize, ColorId), usize> = HashMap::new();
    let mut keys = vec![(initial, 0)];
    ids.insert((initial, 0), 0);
    let mut choices = Vec::new();
    let mut i = 0;
    while i < keys.len() {
        let (q, _) = keys[i];
        let mut mine = Vec::new();
        for x in 0..ins {
            let mut succ = BTreeSet::new();
            for y in 0..outs {
                let key = step(q, x, y);
                let id = *ids.entry(key).or_insert_with(|| {
                    keys.push(key);
                    keys.len() - 1
                });
                succ.insert(id);
            }
            mine.push(succ.into_iter().collect());
        }
        choices.push(mine);
        i += 1;
    }
    ExplicitGame {
        color: keys.iter().map(|k| k.1).collect(),
        choices,
        initial: 0,
    }
}

pub fn hog_game(g: &Hog) -> ExplicitGame {
    let place = |x: u64, y: u64| {
        let mut bits = 0u64;
        for (i, p) in g.inputs.iter().enumerate() {
            bits |= (x >> i & 1) << p.0;
        }
        for (i, p) in g.outputs.iter().enumerate() {
            bits |= (y >> i & 1) << p.0;
        }
        bits
    };
    let step = |q: usize, x: u64, y: u64| {
        let l = place(x, y);
        let t = g
            .hoa
            .transitions
            .iter()
            .find(|t| t.source == q && eval_formula(&t.guard, l))
            .expect("complete arena");
        (t.target, t.color)
    };
    expand_game(g.hoa.initial[0], 1 << g.inputs.len(), 1 << g.outputs.len(), &step)
}

fn eval_int(g: &IntGuard, x: &[i64]) -> bool {
    match g {
        IntGuard::True => true,
        IntGuard::False => false,
        IntGuard::Atom(a) => {
            let v: i64 = a.constant + a.coeffs.iter().zip(x).map(|(c, v)| c * v).sum::<i64>();
            match a.cmp {
                Cmp::Lt => v < 0,
                Cmp::Le => v <= 0,
                Cmp::Eq => v == 0,
                Cmp::Ne => v != 0,
                Cmp::Ge => v >= 0,
                Cmp::Gt => v > 0,
            }
        }
        IntGuard::Not(h) => !eval_int(h, x),
        IntGuard::And(hs) => hs.iter().all(|h| eval_int(h, x)),
        IntGuard::Or(hs) => hs.iter().any(|h| eval_int(h, x)),
    }
}

fn decode(mut k: u64, n: usize, base: u64) -> Vec<i64> {
    let mut v = vec![0; n];
    for slot in v.iter_mut().rev() {
        *slot = (k % base) as i64;
        k /= base;
    }
    v
}

pub fn int_game(g: &FGame<IntGuard>, o: &IntOracle) -> ExplicitGame {
    let base = o.domain as u64 + 1;
    let (ni, no) = (o.inputs.len(), o.outputs.len());
    let step = |q: usize, x: u64, y: u64| {
        let mut v = decode(x, ni, base);
        v.extend(decode(y, no, base));
        let t = g
            .transitions
            .iter()
            .find(|t| t.source == q && eval_int(&t.guard, &v))
            .expect("complete arena");
        (t.target, t.color)
    };
    expand_game(g.initial, base.pow(ni as u32), base.pow(no as u32), &step)
}

/// `∃x_in ∀x_out φ` by nested loops; the first witness in counting order.
pub fn int_exists_forall(phi: &IntGuard, o: &IntOracle) -> Option<Vec<i64>> {
    let base = o.domain as u64 + 1;
    let (ni, no) = (o.inputs.len(), o.outputs.len());
    (0..base.pow(ni as u32)).map(|x| decode(x, ni, base)).find(|x| {
        (0..base.pow(no as u32)).all(|y| {
            let mut v = x.clone();
            v.extend(decode(y, no, base));
            eval_int(phi, &v)
        })
    })
}

/// Turn-based game: vertex owners, priorities (max even wins for Out) and
/// successors.
struct Parity {
    owner: Vec<Player>,
    prio: Vec<u32>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl Parity {
    fn new() -> Parity {
        Parity {
            owner: Vec::new(),
            prio: Vec::new(),
            succ: Vec::new(),
            pred: Vec::new(),
        }
    }

    fn add(&mut self, owner: Player, prio: u32) -> usize {
        self.owner.push(owner);
        self.prio.push(prio);
        self.succ.push(Vec::new());
        self.owner.len() - 1
    }

    fn finish(&mut self) {
        self.pred = vec![Vec::new(); self.owner.len()];
        for (v, ss) in self.succ.iter().enumerate() {
            for &w in ss {
                self.pred[w].push(v);
            }
        }
    }

    fn attract(&self, alive: &[bool], who: Player, target: &[bool]) -> Vec<bool> {
        let n = self.owner.len();
        let mut attr: Vec<bool> = (0..n).map(|v| alive[v] && target[v]).collect();
        let mut left: Vec<usize> = (0..n).map(|v| self.succ[v].iter().filter(|&&w| alive[w]).count()).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| attr[v]).collect();
        while let Some(w) = queue.pop_front() {
            for &v in &self.pred[w] {
                if !alive[v] || attr[v] {
                    continue;
                }
                left[v] -= 1;
                if self.owner[v] == who || left[v] == 0 {
                    attr[v] = true;
                    queue.push_back(v);
                }
            }
        }
        attr
    }

    /// Out's winning region inside `alive`.
    fn solve(&self, alive: &[bool]) -> Vec<bool> {
        let n = self.owner.len();
        let Some(top) = (0..n).filter(|&v| alive[v]).map(|v| self.prio[v]).max() else {
            return vec![false; n];
        };
        let me = if top % 2 == 0 { Player::Out } else { Player::In };
        let at_top: Vec<bool> = (0..n).map(|v| alive[v] && self.prio[v] == top).collect();
        let a = self.attract(alive, me, &at_top);
        let rest: Vec<bool> = (0..n).map(|v| alive[v] && !a[v]).collect();
        let out_wins = self.solve(&rest);
        let other: Vec<bool> = (0..n)
            .map(|v| rest[v] && (out_wins[v] != (me == Player::Out)))
            .collect();
        if !other.iter().any(|&b| b) {
            return (0..n).map(|v| alive[v] && me == Player::Out).collect();
        }
        let b = self.attract(alive, me.opponent(), &other);
        let rest: Vec<bool> = (0..n).map(|v| alive[v] && !b[v]).collect();
        let mut w = self.solve(&rest);
        for v in 0..n {
            if b[v] {
                w[v] = me.opponent() == Player::Out;
            }
        }
        w
    }
}

/// Winner of an expanded game from its initial vertex.
pub fn solve_explicit(game: &ExplicitGame, acc: &Acceptance) -> Player {
    match acc {
        Acceptance::Reachability(r) => {
            let (p, envs) = two_level(game, &|_| 0);
            let target: Vec<bool> = (0..p.owner.len())
                .map(|v| envs.get(v).is_some_and(|&e| game.color[e] != 0 && r.contains(game.color[e])))
                .collect();
            let a = p.attract(&vec![true; p.owner.len()], Player::Out, &target);
            if a[game.initial] {
                Player::Out
            } else {
                Player::In
            }
        }
        Acceptance::Safety(s) => {
            let (p, envs) = two_level(game, &|_| 0);
            let bad: Vec<bool> = (0..p.owner.len())
                .map(|v| envs.get(v).is_some_and(|&e| game.color[e] != 0 && !s.contains(game.color[e])))
                .collect();
            let a = p.attract(&vec![true; p.owner.len()], Player::In, &bad);
            if a[game.initial] {
                Player::In
            } else {
                Player::Out
            }
        }
        _ => solve_with_records(game, acc),
    }
}

/// In vertices `0..n` (one per arena vertex), then one Out vertex per
/// choice.  Returns the arena vertex of every In vertex.
fn two_level(game: &ExplicitGame, prio: &dyn Fn(usize) -> u32) -> (Parity, Vec<usize>) {
    let mut p = Parity::new();
    let n = game.color.len();
    for v in 0..n {
        p.add(Player::In, prio(v));
    }
    for v in 0..n {
        for succ in &game.choices[v] {
            let c = p.add(Player::Out, 0);
            p.succ[v].push(c);
            p.succ[c] = succ.clone();
        }
    }
    p.finish();
    (p, (0..n).collect())
}
/// Product with appearance records over the colors: entering a vertex of
/// color `c` found at position `h` of the record moves `c` to the front
/// and scores `2h+4` if the first `h+1` colors are accepting, else `2h+3`.
/// Neutral vertices score 0 or 1 depending on the empty set.
fn solve_with_records(game: &ExplicitGame, acc: &Acceptance) -> Player {
    let top = game.color.iter().copied().max().unwrap_or(0);
    let mut p = Parity::new();
    let mut ids: HashMap<(usize, Vec<ColorId>, u32), usize> = HashMap::new();
    let mut accepting: HashMap<ColorSet, bool> = HashMap::new();
    let neutral = if acc_holds(acc, ColorSet::empty(), ColorSet::empty()) { 0 } else { 1 };
    let root = p.add(Player::In, neutral);
    let mut queue = VecDeque::from([(root, game.initial, (1..=top).collect::<Vec<ColorId>>())]);
    while let Some((node, v, record)) = queue.pop_front() {
        for succ in &game.choices[v] {
            let c = p.add(Player::Out, 0);
            p.succ[node].push(c);
            for &w in succ {
                let col = game.color[w];
                let (next, prio) = if col == 0 {
                    (record.clone(), neutral)
                } else {
                    let h = record.iter().position(|&x| x == col).expect("color outside the record");
                    let mut next = record.clone();
                    next.remove(h);
                    next.insert(0, col);
                    let hit: ColorSet = next[..=h].iter().copied().collect();
                    let good = *accepting.entry(hit).or_insert_with(|| acc_holds(acc, hit, hit));
                    (next, 2 * h as u32 + if good { 4 } else { 3 })
                };
                let key = (w, next, prio);
                let id = match ids.get(&key) {
                    Some(&id) => id,
                    None => {
                        let id = p.add(Player::In, prio);
                        ids.insert(key.clone(), id);
                        queue.push_back((id, w, key.1));
                        id
                    }
                };
                p.succ[c].push(id);
            }
        }
    }
    p.finish();
    let alive = vec![true; p.owner.len()];
    if p.solve(&alive)[root] {
        Player::Out
    } else {
        Player::In
    }
}
