//! Solving front end: picks an engine and packages the winner with a
//! strategy for it.

use std::collections::HashMap;

use crate::bounds::Bounds;
use crate::formula::Valuation;

use super::arena::GameArena;
use super::classical::{lar_product, lar_step, solve_classical, ClassicalGame, Solution, VertexLabel};
use super::direct::solve_hog_direct;
use super::pg::{build_pg, PgMode};
use super::strategy::{InStrategy, OutMachine};
use super::{GameError, Hog, Player};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    PgExact,
    PgFull,
    Direct,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub engine: Engine,
    /// Also compute a strategy for the winner.
    pub strategies: bool,
    pub bounds: Bounds,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            engine: Engine::PgExact,
            strategies: false,
            bounds: Bounds::default(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GameSizes {
    pub arena_states: usize,
    pub pg_vertices: usize,
    pub pg_edges: usize,
    /// Memory states of Out's strategy, when one was computed.
    pub out_memory: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct WinningReport {
    pub winner: Player,
    pub arena: GameArena,
    pub in_strategy: Option<InStrategy>,
    pub out_strategy: Option<OutMachine>,
    pub sizes: GameSizes,
}

/// Appearance records support at most this many colors.
const LAR_COLORS: usize = 6;

pub fn solve_hog(g: &Hog, opts: &SolveOptions) -> Result<WinningReport, GameError> {
    let arena = GameArena::new(g);
    let mut sizes = GameSizes {
        arena_states: arena.num_states(),
        ..GameSizes::default()
    };
    let direct = if opts.engine == Engine::Direct {
        let w = solve_hog_direct(g)?;
        if !opts.strategies {
            return Ok(WinningReport {
                winner: w,
                arena,
                in_strategy: None,
                out_strategy: None,
                sizes,
            });
        }
        Some(w)
    } else {
        None
    };
    let mode = if opts.engine == Engine::PgFull { PgMode::Full } else { PgMode::Exact };
    let game = build_pg(g, &arena, mode, &opts.bounds)?;
    sizes.pg_vertices = game.num_vertices();
    sizes.pg_edges = game.num_edges();
    let sol = solve_classical(&game);
    let winner = sol.winner[game.initial];
    if let Some(w) = direct {
        if w != winner {
            return Err(GameError::Unsupported(
                "the direct solver and the reduction disagree on the winner".into(),
            ));
        }
    }
    let mut report = WinningReport {
        winner,
        arena,
        in_strategy: None,
        out_strategy: None,
        sizes,
    };
    if opts.strategies {
        match winner {
            Player::In => {
                if sol.memoryless_for(Player::In) {
                    report.in_strategy = Some(in_strategy(g, &game, &sol));
                }
            }
            Player::Out => {
                let m = if sol.memoryless_for(Player::Out) {
                    memoryless_machine(g, &report.arena, &game, &sol)
                } else {
                    lar_machine(g, &report.arena, &game)?
                };
                report.sizes.out_memory = Some(m.memory_size);
                report.out_strategy = Some(m);
            }
        }
    }
    Ok(report)
}

/// In's choices on its winning region.  Everywhere else (targets of a
/// safety condition once the play has already left the safe colors, and
/// states only reachable after that) the first offer is taken.
fn in_strategy(g: &Hog, game: &ClassicalGame, sol: &Solution) -> InStrategy {
    let mut s = InStrategy::default();
    for v in 0..game.num_vertices() {
        let VertexLabel::State(q) = game.label[v] else {
            continue;
        };
        let chosen = match sol.winner[v] {
            Player::In => sol.strategy[v].or_else(|| game.succ[v].first().copied()),
            Player::Out => game.succ[v].first().copied(),
        };
        if let Some(o) = chosen {
            if let VertexLabel::Offer { set, witness, .. } = &game.label[o] {
                s.choice.insert(q, (Valuation::from_bits(&g.inputs, *witness), set.clone()));
            }
        }
    }
    s
}

/// Out vertex per `(state, offered set)`.
fn offer_index(game: &ClassicalGame) -> HashMap<(usize, Vec<usize>), usize> {
    let mut idx = HashMap::new();
    for (v, l) in game.label.iter().enumerate() {
        if let VertexLabel::Offer { state, set, .. } = l {
            idx.insert((*state, set.clone()), v);
        }
    }
    idx
}

/// Fills the action table from a choice function over Out vertices.
fn actions(
    g: &Hog,
    arena: &GameArena,
    game: &ClassicalGame,
    memory: usize,
    mut choose: impl FnMut(usize, usize) -> Option<usize>,
    machine: &mut OutMachine,
) {
    let offers = offer_index(game);
    for s in 0..arena.num_states() {
        for v_in in 0..1u64 << g.inputs.len() {
            let set = arena.exact_set(g, s, v_in);
            let o = offers[&(s, set.clone())];
            for m in 0..memory {
                let t = choose(o, m).filter(|t| set.contains(t)).unwrap_or(set[0]);
                let v_out = arena
                    .output_towards(g, s, v_in, t)
                    .expect("successor in the exact set is reachable");
                machine.action.insert((s, m, v_in), v_out);
            }
        }
    }
}

fn memoryless_machine(g: &Hog, arena: &GameArena, game: &ClassicalGame, sol: &Solution) -> OutMachine {
    let mut m = OutMachine {
        memory_size: 1,
        initial_memory: 0,
        update: vec![Vec::new()],
        action: Default::default(),
    };
    actions(
        g,
        arena,
        game,
        1,
        |o, _| match sol.winner[o] {
            Player::Out => sol.strategy[o],
            Player::In => None,
        },
        &mut m,
    );
    m
}

fn lar_machine(g: &Hog, arena: &GameArena, game: &ClassicalGame) -> Result<OutMachine, GameError> {
    let lar = lar_product(game, LAR_COLORS)?;
    let psol = solve_classical(&lar.game);
    let colors: Vec<_> = game.colors().iter().collect();
    let max_color = colors.iter().copied().max().unwrap_or(0) as usize;
    // close the memory space under every color
    let mut perms = lar.perms.clone();
    let mut ids = lar.perm_ids.clone();
    let mut intern = |p: Vec<_>, perms: &mut Vec<Vec<_>>| -> usize {
        if let Some(&i) = ids.get(&p) {
            return i;
        }
        perms.push(p.clone());
        ids.insert(p, perms.len() - 1);
        perms.len() - 1
    };
    let initial_memory = intern(colors.clone(), &mut perms);
    let mut update = Vec::new();
    let mut i = 0;
    while i < perms.len() {
        let mut row = vec![i; max_color + 1];
        for &c in &colors {
            let (next, _) = lar_step(&game.acc, &perms[i], c);
            row[c as usize] = intern(next, &mut perms);
        }
        update.push(row);
        i += 1;
    }
    let product_id: HashMap<(usize, usize), usize> =
        lar.base.iter().enumerate().map(|(pv, &key)| (key, pv)).collect();
    let mut machine = OutMachine {
        memory_size: perms.len(),
        initial_memory,
        update,
        action: Default::default(),
    };
    actions(
        g,
        arena,
        game,
        perms.len(),
        |o, m| {
            let pv = *product_id.get(&(o, m))?;
            if psol.winner[pv] != Player::Out {
                return None;
            }
            psol.strategy[pv].map(|pw| lar.base[pw].0)
        },
        &mut machine,
    );
    Ok(machine)
}
