//! Strategy objects and their independent checks.
//!
//! * In: a positional choice of a witness input and a set of successors per
//!   arena state.
//! * Out: an order profile (a preference order over successors per state,
//!   Out always takes the least reachable one) or a finite-memory machine.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::automaton::{Acceptance, ColorId, ColorSet};
use crate::bounds::Bounds;
use crate::formula::{sat, Formula, Valuation};
use crate::graph::ColorGraph;

use super::arena::GameArena;
use super::classical::{solve_classical, VertexLabel};
use super::pg::{build_pg, check_inputs, exact_sets, PgMode};
use super::{GameError, Hog, Player};

/// Positional strategy for In over the arena states: the input valuation
/// it plays and the set of successors that valuation forces.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InStrategy {
    pub choice: BTreeMap<usize, (Valuation, Vec<usize>)>,
}

/// A total order over arena states for every arena state (`order[q]` lists
/// the states from most to least preferred).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderProfile {
    pub order: Vec<Vec<usize>>,
}

impl OrderProfile {
    fn ranks(&self) -> Vec<Vec<usize>> {
        self.order
            .iter()
            .map(|ord| {
                let mut r = vec![usize::MAX; ord.len()];
                for (i, &q) in ord.iter().enumerate() {
                    r[q] = i;
                }
                r
            })
            .collect()
    }
}

/// Finite-memory strategy for Out.  Memory is updated with the color of
/// every arena state entered, starting from `initial_memory` before the
/// initial state is read.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutMachine {
    pub memory_size: usize,
    pub initial_memory: usize,
    /// `update[m][c]`; colors beyond the table leave memory unchanged.
    pub update: Vec<Vec<usize>>,
    /// `(arena state, memory, input bits) -> output bits`.
    pub action: BTreeMap<(usize, usize, u64), u64>,
}

impl OutMachine {
    pub fn next_memory(&self, m: usize, c: ColorId) -> usize {
        self.update[m].get(c as usize).copied().unwrap_or(m)
    }

    pub fn reaction(&self, s: usize, m: usize, v_in: u64) -> Option<u64> {
        self.action.get(&(s, m, v_in)).copied()
    }
}

/// Graph over arena states (or products with them) whose edges carry the
/// color of their source node.
struct PlayGraph {
    graph: ColorGraph,
    node_color: Vec<ColorId>,
    initial: usize,
}

impl PlayGraph {
    fn new(initial: usize) -> PlayGraph {
        PlayGraph {
            graph: ColorGraph::new(0),
            node_color: Vec::new(),
            initial,
        }
    }

    fn add_node(&mut self, color: ColorId) -> usize {
        self.node_color.push(color);
        self.graph.add_node()
    }

    fn add_edge(&mut self, a: usize, b: usize) {
        let c = self.node_color[a];
        self.graph.add_edge(a, b, c);
    }

    fn in_set(c: ColorId, s: ColorSet) -> bool {
        c != 0 && s.contains(c)
    }

    /// Some infinite path from the initial node staying inside `ok`.
    fn has_infinite_path_within(&self, ok: &[bool]) -> bool {
        if !ok[self.initial] {
            return false;
        }
        let g = &self.graph;
        let n = g.num_nodes();
        let mut seen = vec![false; n];
        seen[self.initial] = true;
        let mut stack = vec![self.initial];
        while let Some(q) = stack.pop() {
            for &e in &g.out[q] {
                let t = g.edges[e].target;
                if ok[t] && !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        let (comp, _) = g.sccs(&seen, &|_| true);
        g.edges
            .iter()
            .any(|e| seen[e.source] && seen[e.target] && comp[e.source] == comp[e.target])
    }

    /// Some path from the initial node satisfies `acc` (paths are infinite).
    fn some_path_satisfies(&self, acc: &Acceptance) -> bool {
        let n = self.graph.num_nodes();
        match acc {
            Acceptance::Reachability(r) => {
                let reach = self.graph.reachable(&[self.initial]);
                // every node has a successor in the graphs built here
                (0..n).any(|q| reach[q] && Self::in_set(self.node_color[q], *r))
            }
            Acceptance::Safety(s) => {
                let ok: Vec<bool> = self
                    .node_color
                    .iter()
                    .map(|&c| c == 0 || s.contains(c))
                    .collect();
                self.has_infinite_path_within(&ok)
            }
            acc => {
                let el = acc.to_el().expect("prefix-independent condition");
                self.graph.find_lasso(&[self.initial], &el.dnf()).is_some()
            }
        }
    }

    /// Every path from the initial node satisfies `acc`.
    fn all_paths_satisfy(&self, acc: &Acceptance) -> bool {
        let n = self.graph.num_nodes();
        match acc {
            Acceptance::Reachability(r) => {
                let ok: Vec<bool> = (0..n).map(|q| !Self::in_set(self.node_color[q], *r)).collect();
                !self.has_infinite_path_within(&ok)
            }
            Acceptance::Safety(s) => {
                let reach = self.graph.reachable(&[self.initial]);
                (0..n).all(|q| !reach[q] || self.node_color[q] == 0 || s.contains(self.node_color[q]))
            }
            acc => {
                let el = acc.to_el().expect("prefix-independent condition");
                self.graph.find_lasso(&[self.initial], &el.negate().dnf()).is_none()
            }
        }
    }
}

/// Checks that `strategy` wins for In: every chosen set is forced by its
/// witness, and no play compatible with the chosen sets satisfies the
/// condition.  A missing choice at a reachable state is an error.
pub fn certify_in_strategy(g: &Hog, strategy: &InStrategy) -> Result<bool, GameError> {
    let arena = GameArena::new(g);
    let n = arena.num_states();
    let mut pg = PlayGraph::new(arena.initial);
    for s in 0..n {
        pg.add_node(arena.color[s]);
    }
    let mut seen = vec![false; n];
    seen[arena.initial] = true;
    let mut queue = VecDeque::from([arena.initial]);
    while let Some(s) = queue.pop_front() {
        let (witness, set) = strategy
            .choice
            .get(&s)
            .ok_or_else(|| GameError::MalformedStrategy(format!("no choice at arena state {s}")))?;
        if set.is_empty() || set.iter().any(|&t| t >= n) {
            return Err(GameError::MalformedStrategy(format!(
                "the set chosen at arena state {s} is empty or out of range"
            )));
        }
        if witness.domain().any(|p| !g.inputs.contains(&p)) {
            return Err(GameError::MalformedStrategy(format!(
                "the witness at arena state {s} assigns a non-input proposition"
            )));
        }
        let bits = witness.bits_over(&g.inputs);
        let escapes = arena.moves[s].iter().any(|m| {
            !set.contains(&m.target) && {
                let f = m.guard.restrict_bits(&g.inputs, bits);
                f != Formula::False && sat(&f).is_some()
            }
        });
        if escapes {
            return Ok(false);
        }
        for &t in set {
            pg.add_edge(s, t);
            if !seen[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    Ok(!pg.some_path_satisfies(&g.acc))
}

/// Extracts an order profile for Out from a positional winning strategy in
/// the full reduction.  Errors when Out does not win or needs memory.
pub fn extract_order_profile(g: &Hog, bounds: &Bounds) -> Result<OrderProfile, GameError> {
    let arena = GameArena::new(g);
    let game = build_pg(g, &arena, PgMode::Full, bounds)?;
    let sol = solve_classical(&game);
    if sol.winner[game.initial] != Player::Out {
        return Err(GameError::Unsupported("the controller does not win this game".into()));
    }
    if !sol.memoryless_for(Player::Out) {
        return Err(GameError::Unsupported(
            "the controller needs memory; no order profile exists for the computed strategy".into(),
        ));
    }
    let n = arena.num_states();
    let mut order = Vec::with_capacity(n);
    for s in 0..n {
        // good sets of s, ascending as bitmasks (compare sorted descending)
        let mut offers: Vec<(Vec<usize>, usize)> = game.succ[s]
            .iter()
            .filter_map(|&v| match &game.label[v] {
                VertexLabel::Offer { set, .. } => Some((set.clone(), v)),
                _ => None,
            })
            .collect();
        offers.sort_by(|a, b| a.0.iter().rev().cmp(b.0.iter().rev()));
        let mut ord = Vec::with_capacity(n);
        while let Some((set, v)) = offers.first().cloned() {
            let pick = match sol.strategy[v] {
                Some(p) if sol.winner[v] == Player::Out => p,
                _ => set[0],
            };
            if !ord.contains(&pick) {
                ord.push(pick);
            }
            offers.retain(|(s2, _)| !s2.contains(&pick));
        }
        for q in 0..n {
            if !ord.contains(&q) {
                ord.push(q);
            }
        }
        order.push(ord);
    }
    Ok(OrderProfile { order })
}

/// Checks that the order profile wins for Out: against every input, Out
/// moves to the most preferred state of the exact successor set.
pub fn verify_order_profile(g: &Hog, profile: &OrderProfile, bounds: &Bounds) -> Result<bool, GameError> {
    check_inputs(g, bounds)?;
    let arena = GameArena::new(g);
    let n = arena.num_states();
    if profile.order.len() != n || profile.order.iter().any(|o| {
        let mut s = o.clone();
        s.sort_unstable();
        s != (0..n).collect::<Vec<_>>()
    }) {
        return Err(GameError::MalformedStrategy(
            "an order profile needs a permutation of the arena states per state".into(),
        ));
    }
    let ranks = profile.ranks();
    let mut pg = PlayGraph::new(arena.initial);
    for s in 0..n {
        pg.add_node(arena.color[s]);
    }
    for s in 0..n {
        let mut targets: Vec<usize> = exact_sets(&arena, g, s)
            .into_iter()
            .map(|(_, set)| *set.iter().min_by_key(|&&t| ranks[s][t]).expect("empty exact set"))
            .collect();
        targets.sort_unstable();
        targets.dedup();
        for t in targets {
            pg.add_edge(s, t);
        }
    }
    Ok(pg.all_paths_satisfy(&g.acc))
}

/// Checks that the machine wins for Out by exploring the product of the
/// arena with its memory against every input.
pub fn verify_out_machine(g: &Hog, machine: &OutMachine, bounds: &Bounds) -> Result<bool, GameError> {
    check_inputs(g, bounds)?;
    let arena = GameArena::new(g);
    if machine.initial_memory >= machine.memory_size
        || machine.update.len() != machine.memory_size
        || machine.update.iter().flatten().any(|&m| m >= machine.memory_size)
    {
        return Err(GameError::MalformedStrategy("memory update out of range".into()));
    }
    let m0 = machine.next_memory(machine.initial_memory, arena.color[arena.initial]);
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut nodes = vec![(arena.initial, m0)];
    let mut pg = PlayGraph::new(0);
    ids.insert((arena.initial, m0), pg.add_node(arena.color[arena.initial]));
    let mut i = 0;
    while i < nodes.len() {
        let (s, m) = nodes[i];
        for v_in in 0..1u64 << g.inputs.len() {
            let Some(v_out) = machine.reaction(s, m, v_in) else {
                return Ok(false);
            };
            let Some(t) = arena.step(g, s, v_in, v_out) else {
                return Ok(false);
            };
            let mt = machine.next_memory(m, arena.color[t]);
            let id = match ids.get(&(t, mt)) {
                Some(&id) => id,
                None => {
                    let id = pg.add_node(arena.color[t]);
                    ids.insert((t, mt), id);
                    nodes.push((t, mt));
                    id
                }
            };
            pg.add_edge(i, id);
        }
        i += 1;
    }
    Ok(pg.all_paths_satisfy(&g.acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn arbiter_profile_is_extracted_and_verified() {
        let g = fixtures::arbiter_game();
        let b = Bounds::default();
        let p = extract_order_profile(&g, &b).unwrap();
        assert!(verify_order_profile(&g, &p, &b).unwrap());
        // granting at q1 only when forced is losing: prefer q1 over q2 forever
        let bad = OrderProfile {
            order: vec![vec![0, 2, 1, 3], vec![0, 2, 1, 3], vec![2, 1, 0, 3], vec![3, 0, 1, 2]],
        };
        assert!(!verify_order_profile(&g, &bad, &b).unwrap());
    }

    #[test]
    fn in_strategy_checks() {
        let g = fixtures::arbiter_game();
        let mut s = InStrategy::default();
        assert!(matches!(certify_in_strategy(&g, &s), Err(GameError::MalformedStrategy(_))));
        let r = |b| Valuation::from_pairs([(crate::formula::PropId(0), b)]);
        s.choice.insert(0, (r(true), vec![1, 2]));
        s.choice.insert(1, (r(true), vec![2, 3]));
        s.choice.insert(2, (r(false), vec![1, 2]));
        s.choice.insert(3, (r(false), vec![3]));
        // Out can keep visiting q2 (color 1)
        assert!(!certify_in_strategy(&g, &s).unwrap());
        s.choice.insert(0, (r(true), vec![0]));
        assert!(!certify_in_strategy(&g, &s).unwrap(), "{{q1}} is not forced");
    }
}
