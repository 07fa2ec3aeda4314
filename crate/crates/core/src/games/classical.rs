//! Explicit turn-based games with colored vertices and their solvers:
//! attractors for reachability and safety, Zielonka's recursion for parity
//! (Büchi and co-Büchi as two-priority parity), and McNaughton/Zielonka's
//! recursion over color sets for every other condition.

use std::collections::{HashMap, VecDeque};

use crate::automaton::{Acceptance, ColorId, ColorSet};

use super::{GameError, Player};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VertexLabel {
    Plain,
    /// Turn of In at an arena state.
    State(usize),
    /// Turn of Out after In announced `set` from `state`; `witness` is an
    /// input valuation (bits over the game inputs) forcing the successor
    /// into `set`.
    Offer {
        state: usize,
        set: Vec<usize>,
        witness: u64,
    },
}

/// Turn-based game; color 0 is neutral and ignored by the condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalGame {
    pub owner: Vec<Player>,
    pub color: Vec<ColorId>,
    pub succ: Vec<Vec<usize>>,
    pub label: Vec<VertexLabel>,
    pub initial: usize,
    pub acc: Acceptance,
}

impl ClassicalGame {
    pub fn new(acc: Acceptance) -> ClassicalGame {
        ClassicalGame {
            owner: Vec::new(),
            color: Vec::new(),
            succ: Vec::new(),
            label: Vec::new(),
            initial: 0,
            acc,
        }
    }

    pub fn add_vertex(&mut self, owner: Player, color: ColorId, label: VertexLabel) -> usize {
        self.owner.push(owner);
        self.color.push(color);
        self.succ.push(Vec::new());
        self.label.push(label);
        self.owner.len() - 1
    }

    pub fn num_vertices(&self) -> usize {
        self.owner.len()
    }

    pub fn num_edges(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// Nonzero colors present on the vertices.
    pub fn colors(&self) -> ColorSet {
        self.color.iter().filter(|&&c| c != 0).copied().collect()
    }
}

/// Winner and a positional strategy per vertex (for vertices owned by
/// their winner).  `memoryless[p]` tells whether the positional choices
/// form a winning strategy for player `p` on its whole region; when false
/// the player needs memory for this condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub winner: Vec<Player>,
    pub strategy: Vec<Option<usize>>,
    pub memoryless: [bool; 2],
}

impl Solution {
    pub fn memoryless_for(&self, p: Player) -> bool {
        self.memoryless[p.idx()]
    }
}

struct Solver<'a> {
    game: &'a ClassicalGame,
    pred: Vec<Vec<usize>>,
    strategy: Vec<Option<usize>>,
    memoryless: [bool; 2],
    winner_cache: HashMap<ColorSet, Player>,
}

type Regions = [Vec<bool>; 2];

impl<'a> Solver<'a> {
    fn new(game: &'a ClassicalGame) -> Solver<'a> {
        let n = game.num_vertices();
        let mut pred = vec![Vec::new(); n];
        for (v, ss) in game.succ.iter().enumerate() {
            assert!(!ss.is_empty(), "vertex {v} has no successor");
            for &w in ss {
                pred[w].push(v);
            }
        }
        Solver {
            game,
            pred,
            strategy: vec![None; n],
            memoryless: [true; 2],
            winner_cache: HashMap::new(),
        }
    }

    fn empty(&self) -> Vec<bool> {
        vec![false; self.game.num_vertices()]
    }

    /// Attractor of `player` to `target` inside `alive`, with the choices
    /// that realize it.
    fn attractor(&self, alive: &[bool], player: Player, target: &[bool]) -> (Vec<bool>, Vec<Option<usize>>) {
        let g = self.game;
        let n = g.num_vertices();
        let mut attr = vec![false; n];
        let mut choice = vec![None; n];
        let mut count: Vec<usize> = (0..n)
            .map(|v| if alive[v] { g.succ[v].iter().filter(|&&w| alive[w]).count() } else { 0 })
            .collect();
        let mut queue = VecDeque::new();
        for v in 0..n {
            if alive[v] && target[v] {
                attr[v] = true;
                queue.push_back(v);
            }
        }
        while let Some(w) = queue.pop_front() {
            for &v in &self.pred[w] {
                if !alive[v] || attr[v] {
                    continue;
                }
                if g.owner[v] == player {
                    attr[v] = true;
                    choice[v] = Some(w);
                    queue.push_back(v);
                } else {
                    count[v] -= 1;
                    if count[v] == 0 {
                        attr[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        (attr, choice)
    }

    fn first_alive_succ(&self, v: usize, alive: &[bool]) -> Option<usize> {
        self.game.succ[v].iter().copied().find(|&w| alive[w])
    }

    /// Fills in the choices of `player` on `region`: attractor choices where
    /// available, otherwise the first successor inside `stay`.
    fn set_choices(&mut self, region: &[bool], player: Player, choice: &[Option<usize>], stay: &[bool]) {
        for v in 0..region.len() {
            if region[v] && self.game.owner[v] == player {
                self.strategy[v] = choice[v].or_else(|| self.first_alive_succ(v, stay));
            }
        }
    }

    fn zielonka(&mut self, alive: &[bool], prio: &[u32]) -> Regions {
        let n = self.game.num_vertices();
        let Some(p) = (0..n).filter(|&v| alive[v]).map(|v| prio[v]).max() else {
            return [self.empty(), self.empty()];
        };
        let sigma = if p % 2 == 0 { Player::Out } else { Player::In };
        let opp = sigma.opponent();
        let top: Vec<bool> = (0..n).map(|v| alive[v] && prio[v] == p).collect();
        let (a, a_choice) = self.attractor(alive, sigma, &top);
        let sub: Vec<bool> = (0..n).map(|v| alive[v] && !a[v]).collect();
        let w = self.zielonka(&sub, prio);
        if !w[opp.idx()].iter().any(|&b| b) {
            let region: Vec<bool> = a.clone();
            self.set_choices(&region, sigma, &a_choice, alive);
            let mut out = [self.empty(), self.empty()];
            out[sigma.idx()] = alive.to_vec();
            return out;
        }
        let (b, b_choice) = self.attractor(alive, opp, &w[opp.idx()]);
        let fringe: Vec<bool> = (0..n).map(|v| b[v] && !w[opp.idx()][v]).collect();
        self.set_choices(&fringe, opp, &b_choice, alive);
        let rest: Vec<bool> = (0..n).map(|v| alive[v] && !b[v]).collect();
        let mut w2 = self.zielonka(&rest, prio);
        for v in 0..n {
            if b[v] {
                w2[opp.idx()][v] = true;
            }
        }
        w2
    }

    fn winner_of(&mut self, colors: ColorSet) -> Player {
        if let Some(&p) = self.winner_cache.get(&colors) {
            return p;
        }
        let p = if self.game.acc.eval_inf(colors) {
            Player::Out
        } else {
            Player::In
        };
        self.winner_cache.insert(colors, p);
        p
    }

    fn mcnaughton(&mut self, alive: &[bool]) -> Regions {
        let n = self.game.num_vertices();
        if !alive.iter().any(|&b| b) {
            return [self.empty(), self.empty()];
        }
        let colors: ColorSet = (0..n)
            .filter(|&v| alive[v] && self.game.color[v] != 0)
            .map(|v| self.game.color[v])
            .collect();
        let fav = self.winner_of(colors);
        let opp = fav.opponent();
        let targets = color_targets(colors, fav, &mut |s| self.winner_of(s));
        let mut last_choice = vec![None; n];
        for target_colors in &targets {
            let target: Vec<bool> = (0..n)
                .map(|v| alive[v] && target_colors.contains(self.game.color[v]))
                .collect();
            let (a, a_choice) = self.attractor(alive, fav, &target);
            let sub: Vec<bool> = (0..n).map(|v| alive[v] && !a[v]).collect();
            let w = self.mcnaughton(&sub);
            if w[opp.idx()].iter().any(|&b| b) {
                let (b, b_choice) = self.attractor(alive, opp, &w[opp.idx()]);
                let fringe: Vec<bool> = (0..n).map(|v| b[v] && !w[opp.idx()][v]).collect();
                self.set_choices(&fringe, opp, &b_choice, alive);
                let rest: Vec<bool> = (0..n).map(|v| alive[v] && !b[v]).collect();
                let mut w2 = self.mcnaughton(&rest);
                for v in 0..n {
                    if b[v] {
                        w2[opp.idx()][v] = true;
                    }
                }
                return w2;
            }
            last_choice = a_choice;
            // remember the attractor region for the positional choices below
            for v in 0..n {
                if a[v] && last_choice[v].is_none() && self.game.owner[v] == fav {
                    last_choice[v] = self.first_alive_succ(v, alive);
                }
            }
        }
        if targets.len() > 1 {
            self.memoryless[fav.idx()] = false;
        }
        for v in 0..n {
            if alive[v] && self.game.owner[v] == fav {
                if let Some(c) = last_choice[v] {
                    self.strategy[v] = Some(c);
                } else if targets.is_empty() {
                    self.strategy[v] = self.first_alive_succ(v, alive);
                }
            }
        }
        let mut out = [self.empty(), self.empty()];
        out[fav.idx()] = alive.to_vec();
        out
    }
}

/// Color sets the favored player attracts to at a node of the recursion.
///
/// If some color `c` makes every subset containing it winning for `fav`,
/// the single target `{c}` suffices (and `fav` needs no memory here).
/// Otherwise the targets are the complements of the maximal subsets won by
/// the opponent.  No target means every subset is won by `fav`.
pub(crate) fn color_targets(
    colors: ColorSet,
    fav: Player,
    winner: &mut dyn FnMut(ColorSet) -> Player,
) -> Vec<ColorSet> {
    if colors.is_empty() {
        return Vec::new();
    }
    let losing: Vec<ColorSet> = colors.subsets().filter(|&s| winner(s) != fav).collect();
    if losing.is_empty() {
        return Vec::new();
    }
    for c in colors.iter() {
        if losing.iter().all(|s| !s.contains(c)) {
            return vec![ColorSet::singleton(c)];
        }
    }
    let maximal: Vec<ColorSet> = losing
        .iter()
        .copied()
        .filter(|&s| !losing.iter().any(|&t| t != s && s.is_subset(t)))
        .collect();
    maximal.into_iter().map(|d| colors.difference(d)).collect()
}

/// Priority of a color for the parity-shaped conditions (max even wins for
/// Out); `None` for the other conditions.
fn priorities(acc: &Acceptance) -> Option<Box<dyn Fn(ColorId) -> u32 + '_>> {
    match acc {
        Acceptance::Parity { colors } => {
            let k = *colors;
            Some(Box::new(move |c| if c >= 1 && c <= k { c } else { 1 }))
        }
        Acceptance::Buchi(b) => Some(Box::new(move |c| if c != 0 && b.contains(c) { 2 } else { 1 })),
        Acceptance::CoBuchi(b) => Some(Box::new(move |c| if c != 0 && b.contains(c) { 1 } else { 0 })),
        _ => None,
    }
}

/// Solves the game from every vertex.
pub fn solve_classical(game: &ClassicalGame) -> Solution {
    let n = game.num_vertices();
    let mut s = Solver::new(game);
    let all = vec![true; n];
    let regions = match &game.acc {
        Acceptance::Reachability(r) => {
            let target: Vec<bool> = game.color.iter().map(|&c| c != 0 && r.contains(c)).collect();
            let (a, choice) = s.attractor(&all, Player::Out, &target);
            let out_region = a.clone();
            s.set_choices(&out_region, Player::Out, &choice, &all);
            let in_region: Vec<bool> = a.iter().map(|&b| !b).collect();
            s.set_choices(&in_region, Player::In, &vec![None; n], &in_region);
            [in_region, out_region]
        }
        Acceptance::Safety(safe) => {
            let bad: Vec<bool> = game.color.iter().map(|&c| c != 0 && !safe.contains(c)).collect();
            let (a, choice) = s.attractor(&all, Player::In, &bad);
            let in_region = a.clone();
            s.set_choices(&in_region, Player::In, &choice, &all);
            let out_region: Vec<bool> = a.iter().map(|&b| !b).collect();
            s.set_choices(&out_region, Player::Out, &vec![None; n], &out_region);
            [in_region, out_region]
        }
        acc => match priorities(acc) {
            Some(p) => {
                let prio: Vec<u32> = game.color.iter().map(|&c| p(c)).collect();
                s.zielonka(&all, &prio)
            }
            None => s.mcnaughton(&all),
        },
    };
    let winner = (0..n)
        .map(|v| if regions[1][v] { Player::Out } else { Player::In })
        .collect::<Vec<_>>();
    let mut strategy = s.strategy;
    for v in 0..n {
        if game.owner[v] != winner[v] {
            strategy[v] = None;
        }
    }
    Solution {
        winner,
        strategy,
        memoryless: s.memoryless,
    }
}

/// Latest-appearance-record product turning any prefix-independent
/// condition into max-even parity.  Memory is a permutation of the colors
/// (most recent first).
pub(crate) struct LarProduct {
    pub game: ClassicalGame,
    /// `(base vertex, permutation id)` per product vertex; a pair may occur
    /// several times with different priorities.
    pub base: Vec<(usize, usize)>,
    pub perms: Vec<Vec<ColorId>>,
    pub perm_ids: HashMap<Vec<ColorId>, usize>,
}

/// New permutation after seeing `c`, and the priority of that step.
pub(crate) fn lar_step(acc: &Acceptance, perm: &[ColorId], c: ColorId) -> (Vec<ColorId>, u32) {
    if c == 0 {
        return (perm.to_vec(), if acc.eval_inf(ColorSet::empty()) { 2 } else { 1 });
    }
    let h = perm.iter().position(|&x| x == c).expect("color outside the record");
    let mut next = Vec::with_capacity(perm.len());
    next.push(c);
    next.extend(perm.iter().copied().filter(|&x| x != c));
    let recent: ColorSet = next[..=h].iter().copied().collect();
    let prio = 2 * h as u32 + if acc.eval_inf(recent) { 4 } else { 3 };
    (next, prio)
}

pub(crate) fn lar_product(game: &ClassicalGame, max_colors: usize) -> Result<LarProduct, GameError> {
    let colors: Vec<ColorId> = game.colors().iter().collect();
    if colors.len() > max_colors {
        return Err(GameError::Unsupported(format!(
            "{} colors are too many for an appearance-record strategy (limit {max_colors})",
            colors.len()
        )));
    }
    let acc = &game.acc;
    let top = 2 * colors.len() as u32 + 2;
    let mut product = ClassicalGame::new(Acceptance::Parity { colors: top.max(2) });
    let mut base = Vec::new();
    let mut perms: Vec<Vec<ColorId>> = Vec::new();
    let mut perm_ids: HashMap<Vec<ColorId>, usize> = HashMap::new();
    // the priority belongs to the step into a vertex, so it is part of the key
    let mut ids: HashMap<(usize, usize, u32), usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |p: Vec<ColorId>, perms: &mut Vec<Vec<ColorId>>| -> usize {
        if let Some(&i) = perm_ids.get(&p) {
            return i;
        }
        perms.push(p.clone());
        perm_ids.insert(p, perms.len() - 1);
        perms.len() - 1
    };
    let (p0, prio0) = lar_step(acc, &colors, game.color[game.initial]);
    let m0 = intern(p0, &mut perms);
    let v0 = product.add_vertex(game.owner[game.initial], prio0, VertexLabel::Plain);
    base.push((game.initial, m0));
    ids.insert((game.initial, m0, prio0), v0);
    product.initial = v0;
    queue.push_back(v0);
    while let Some(pv) = queue.pop_front() {
        let (v, m) = base[pv];
        for &w in &game.succ[v] {
            let (next, prio) = lar_step(acc, &perms[m], game.color[w]);
            let mw = intern(next, &mut perms);
            let pw = match ids.get(&(w, mw, prio)) {
                Some(&x) => x,
                None => {
                    let x = product.add_vertex(game.owner[w], prio, VertexLabel::Plain);
                    base.push((w, mw));
                    ids.insert((w, mw, prio), x);
                    queue.push_back(x);
                    x
                }
            };
            product.succ[pv].push(pw);
        }
    }
    Ok(LarProduct {
        game: product,
        base,
        perms,
        perm_ids,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::AccFormula;

    fn game(acc: Acceptance, vs: &[(Player, ColorId, &[usize])]) -> ClassicalGame {
        let mut g = ClassicalGame::new(acc);
        for &(o, c, ss) in vs {
            let v = g.add_vertex(o, c, VertexLabel::Plain);
            g.succ[v] = ss.to_vec();
        }
        g
    }

    fn check_strategy(g: &ClassicalGame, sol: &Solution) {
        for v in 0..g.num_vertices() {
            if g.owner[v] == sol.winner[v] {
                let s = sol.strategy[v].expect("winner without a choice");
                assert!(g.succ[v].contains(&s));
                assert_eq!(sol.winner[s], sol.winner[v], "choice leaves the region at {v}");
            }
        }
    }

    #[test]
    fn single_out_loop_of_winning_color() {
        let g = game(Acceptance::Buchi(ColorSet::singleton(1)), &[(Player::Out, 1, &[0])]);
        let sol = solve_classical(&g);
        assert_eq!(sol.winner, vec![Player::Out]);
        assert_eq!(sol.strategy[0], Some(0));
    }

    #[test]
    fn parity_and_attractors() {
        // 0 (Out) -> 1 or 2; 1 loops with color 2; 2 loops with color 1
        let vs: &[(Player, ColorId, &[usize])] =
            &[(Player::Out, 0, &[1, 2]), (Player::In, 2, &[1]), (Player::In, 1, &[2])];
        for acc in [
            Acceptance::Parity { colors: 2 },
            Acceptance::Buchi(ColorSet::singleton(2)),
            Acceptance::CoBuchi(ColorSet::singleton(1)),
            Acceptance::Reachability(ColorSet::singleton(2)),
            Acceptance::Safety(ColorSet::singleton(2)),
            Acceptance::El(AccFormula::Inf(ColorSet::singleton(2))),
            Acceptance::Muller(vec![ColorSet::singleton(2)]),
        ] {
            let g = game(acc.clone(), vs);
            let sol = solve_classical(&g);
            assert_eq!(sol.winner, vec![Player::Out, Player::Out, Player::In], "{acc:?}");
            assert_eq!(sol.strategy[0], Some(1));
            check_strategy(&g, &sol);
        }
    }

    #[test]
    fn generalized_buchi_needs_memory() {
        // Out at 0 chooses between a 1-colored and a 2-colored vertex, both back to 0
        let g = game(
            Acceptance::El(AccFormula::and([
                AccFormula::Inf(ColorSet::singleton(1)),
                AccFormula::Inf(ColorSet::singleton(2)),
            ])),
            &[(Player::Out, 0, &[1, 2]), (Player::In, 1, &[0]), (Player::In, 2, &[0])],
        );
        let sol = solve_classical(&g);
        assert_eq!(sol.winner, vec![Player::Out; 3]);
        assert!(!sol.memoryless_for(Player::Out));
        let lar = lar_product(&g, 6).unwrap();
        let psol = solve_classical(&lar.game);
        assert_eq!(psol.winner[lar.game.initial], Player::Out);
    }

    #[test]
    fn targets_for_rabin_are_single() {
        let acc = Acceptance::Rabin(vec![
            (ColorSet::singleton(1), ColorSet::singleton(2)),
            (ColorSet::singleton(3), ColorSet::empty()),
        ]);
        let mut w = |s: ColorSet| if acc.eval_inf(s) { Player::Out } else { Player::In };
        let all = ColorSet::range(1, 3);
        let t = color_targets(all, w(all), &mut w);
        assert_eq!(t, vec![ColorSet::singleton(3)]);
    }
}
