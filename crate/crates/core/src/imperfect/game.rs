//! Games of imperfect information in which Eloise picks an action per
//! observation and every outcome is resolved adversarially, with sure-winning
//! verification of observation-based Moore strategies.

use serde_json::{json, Value};

use super::check_len;
use crate::condition::{Flag, StepEvent};
use crate::error::{Error, Result};
use crate::game::{advance, Player};
use crate::graph::{is_cyclic, parity_traps, sccs};
use crate::guard::Guards;

/// Winning condition of an [`ImperfectGame`], read off vertex priorities and
/// transition flags.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    /// Plain min-parity.
    Parity,
    /// Parity, or finitely many `Obey` transitions.
    Hat,
    /// Parity with infinitely many A-states, or eventually only A-states.
    /// Transitions out of E-states carry `Top` (handing control to the
    /// adversary) or `Follow`; transitions out of A-states carry `Deviate`.
    Tilde,
}

/// Choice of a local strategy at one vertex: successor and flag for the
/// `f` and `n` phases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalChoice {
    pub first: (usize, bool),
    pub next: (usize, bool),
}

impl LocalChoice {
    pub fn pick(&self, fresh: bool) -> (usize, bool) {
        if fresh {
            self.first
        } else {
            self.next
        }
    }
}

/// An action of Eloise in an imperfect game, as an action of the source
/// arena optionally decorated with per-vertex data (vertex indices refer to
/// the source arena).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GameAction {
    Plain(usize),
    /// `theta[i] = (v, w)`: at `v`, outcome `w` counts as disobedience.
    Theta { action: usize, theta: Vec<(usize, usize)> },
    Local { action: usize, theta: Vec<(usize, LocalChoice)> },
}

impl GameAction {
    pub fn source_action(&self) -> usize {
        match self {
            GameAction::Plain(a) | GameAction::Theta { action: a, .. } | GameAction::Local { action: a, .. } => *a,
        }
    }

    pub fn to_json(&self, ids: &[String], actions: &[String]) -> Value {
        match self {
            GameAction::Plain(a) => json!(actions[*a]),
            GameAction::Theta { action, theta } => {
                let avoid: serde_json::Map<String, Value> =
                    theta.iter().map(|&(v, w)| (ids[v].clone(), json!(ids[w]))).collect();
                json!({ "action": actions[*action], "avoid": avoid })
            }
            GameAction::Local { action, theta } => {
                let flag = |t: bool| if t { "top" } else { "bot" };
                let pick = |(w, t): (usize, bool)| json!([ids[w], flag(t)]);
                let local: serde_json::Map<String, Value> = theta
                    .iter()
                    .map(|(v, c)| (ids[*v].clone(), json!({ "f": pick(c.first), "n": pick(c.next) })))
                    .collect();
                json!({ "action": actions[*action], "local": local })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImperfectGame {
    pub ids: Vec<String>,
    pub owners: Vec<Player>,
    pub priorities: Vec<u32>,
    pub class_of: Vec<usize>,
    pub class_names: Vec<String>,
    /// Eloise's actions per observation class.
    pub class_actions: Vec<Vec<GameAction>>,
    /// For an Eloise vertex, `transitions[v][a]` lists the outcomes of
    /// `class_actions[class_of[v]][a]`; an empty list means the action is
    /// illegal there and Eloise loses. An Abelard vertex has one entry
    /// holding his moves.
    pub transitions: Vec<Vec<Vec<(usize, StepEvent)>>>,
    pub initial: usize,
    pub objective: Objective,
    /// Vertex ids and action names of the source arena, for rendering.
    pub source_ids: Vec<String>,
    pub source_actions: Vec<String>,
}

impl ImperfectGame {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.class_names.len()
    }

    /// Vertices reachable from the initial vertex under any actions.
    pub fn reachable(&self) -> Vec<bool> {
        let succ: Vec<Vec<usize>> = self
            .transitions
            .iter()
            .map(|ts| ts.iter().flatten().map(|&(w, _)| w).collect())
            .collect();
        crate::graph::reachable(&succ, [self.initial])
    }

    /// Replaces every action by the source action it decorates.
    pub fn project(&self, sigma: &ObsStrategy) -> ObsStrategy {
        ObsStrategy {
            moves: sigma
                .moves
                .iter()
                .enumerate()
                .map(|(i, m)| m.map(|a| self.class_actions[i % self.class_count()][a].source_action()))
                .collect(),
            ..sigma.clone()
        }
    }

    pub fn strategy_to_json(&self, sigma: &ObsStrategy) -> Value {
        let k = self.class_count();
        let mut up = Vec::new();
        let mut moves = Vec::new();
        for m in 0..sigma.memory_size {
            for c in 0..k {
                let next = sigma.up(m, c);
                if next != m {
                    up.push(json!({ "memory": m, "observation": self.class_names[c], "next": next }));
                }
                if let Some(a) = sigma.next(m, c) {
                    let action = self.class_actions[c][a].to_json(&self.source_ids, &self.source_actions);
                    moves.push(json!({ "memory": m, "observation": self.class_names[c], "action": action }));
                }
            }
        }
        json!({
            "memory_size": sigma.memory_size,
            "initial_memory": sigma.initial_memory,
            "up": up,
            "move": moves,
        })
    }
}

/// A Moore strategy reading observation classes: memory is updated with the
/// class of each newly entered vertex, and the move at a vertex is chosen
/// from its class and the current memory.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ObsStrategy {
    pub memory_size: usize,
    pub initial_memory: usize,
    pub class_count: usize,
    /// `up[m * class_count + c]`
    pub up: Vec<usize>,
    /// `moves[m * class_count + c]`: index into the class's actions.
    pub moves: Vec<Option<usize>>,
}

impl ObsStrategy {
    pub fn positional(moves: Vec<Option<usize>>) -> Self {
        ObsStrategy {
            memory_size: 1,
            initial_memory: 0,
            class_count: moves.len(),
            up: vec![0; moves.len()],
            moves,
        }
    }

    pub fn up(&self, m: usize, c: usize) -> usize {
        self.up[m * self.class_count + c]
    }

    pub fn next(&self, m: usize, c: usize) -> Option<usize> {
        self.moves[m * self.class_count + c]
    }
}

struct Outcome {
    succ: Vec<Vec<usize>>,
    flags: Vec<Vec<Option<Flag>>>,
    priority: Vec<u32>,
    lost: bool,
}

fn outcome(game: &ImperfectGame, sigma: &ObsStrategy, guards: &Guards) -> Result<Outcome> {
    let k = game.class_count();
    let size = game.len() * sigma.memory_size;
    check_len("imperfect product states", size as u128, guards.states)?;
    let state = |v: usize, m: usize| v * sigma.memory_size + m;
    let mut out = Outcome {
        succ: vec![Vec::new(); size],
        flags: vec![Vec::new(); size],
        priority: (0..size).map(|s| game.priorities[s / sigma.memory_size]).collect(),
        lost: false,
    };
    if sigma.class_count != k || sigma.up.len() != k * sigma.memory_size || sigma.moves.len() != sigma.up.len() {
        return Err(Error::InvalidStrategy("strategy tables do not match the observation classes".into()));
    }
    let mut seen = vec![false; size];
    let s0 = state(game.initial, sigma.initial_memory);
    seen[s0] = true;
    let mut stack = vec![s0];
    while let Some(s) = stack.pop() {
        let (v, m) = (s / sigma.memory_size, s % sigma.memory_size);
        let ts = match game.owners[v] {
            Player::Abelard => &game.transitions[v][0],
            Player::Eloise => match sigma.next(m, game.class_of[v]) {
                Some(a) if a < game.transitions[v].len() => &game.transitions[v][a],
                _ => {
                    out.lost = true;
                    return Ok(out);
                }
            },
        };
        if ts.is_empty() {
            out.lost = true;
            return Ok(out);
        }
        for &(w, ev) in ts {
            let t = state(w, sigma.up(m, game.class_of[w]));
            out.succ[s].push(t);
            out.flags[s].push(ev.flag);
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    Ok(out)
}

/// SCCs of the subgraph of states with priority ≥ `c` that contain a
/// priority-`c` state and an internal edge carrying one of `flags`.
fn flagged_trap(o: &Outcome, c: u32, flags: &[Flag]) -> bool {
    let n = o.succ.len();
    let mask: Vec<bool> = (0..n).map(|s| o.priority[s] >= c).collect();
    let mut comp_of = vec![usize::MAX; n];
    let comps = sccs(&o.succ, &mask);
    for (i, comp) in comps.iter().enumerate() {
        for &s in comp {
            comp_of[s] = i;
        }
    }
    comps.iter().enumerate().any(|(i, comp)| {
        comp.iter().any(|&s| o.priority[s] == c)
            && comp.iter().any(|&s| {
                o.succ[s]
                    .iter()
                    .zip(&o.flags[s])
                    .any(|(&t, f)| comp_of[t] == i && f.is_some_and(|f| flags.contains(&f)))
            })
    })
}

fn odd_priorities(o: &Outcome) -> Vec<u32> {
    let mut cs: Vec<u32> = o.priority.iter().copied().filter(|p| p % 2 == 1).collect();
    cs.sort_unstable();
    cs.dedup();
    cs
}

fn violated(game: &ImperfectGame, o: &Outcome) -> bool {
    if o.lost {
        return true;
    }
    let n = o.succ.len();
    match game.objective {
        Objective::Parity => !parity_traps(&o.succ, &o.priority, &vec![true; n], 1).is_empty(),
        Objective::Hat => odd_priorities(o).into_iter().any(|c| flagged_trap(o, c, &[Flag::Obey])),
        Objective::Tilde => {
            // Eloise keeping control forever loses outright.
            let follow: Vec<Vec<usize>> = (0..n)
                .map(|s| {
                    o.succ[s]
                        .iter()
                        .zip(&o.flags[s])
                        .filter(|(_, f)| **f == Some(Flag::Follow))
                        .map(|(&t, _)| t)
                        .collect()
                })
                .collect();
            let stuck = sccs(&follow, &vec![true; n]).iter().any(|c| is_cyclic(&follow, c));
            stuck || odd_priorities(o).into_iter().any(|c| flagged_trap(o, c, &[Flag::Top, Flag::Follow]))
        }
    }
}

/// Whether `sigma` sure-wins `game` against every resolution of the
/// adversary. Playing an illegal action counts as a loss.
pub fn verify_obs_strategy(game: &ImperfectGame, sigma: &ObsStrategy, guards: &Guards) -> Result<bool> {
    Ok(!violated(game, &outcome(game, sigma, guards)?))
}

/// Searches observation-based strategies with at most `memory` states, in
/// order of memory size and then lexicographically over the move and update
/// tables (classes in order, earlier classes most significant). Returns the
/// first sure-winning one.
pub fn solve_imperfect_bounded(game: &ImperfectGame, memory: usize, guards: &Guards) -> Result<Option<ObsStrategy>> {
    if memory == 0 {
        return Err(Error::Precondition("memory bound must be at least 1".into()));
    }
    let k = game.class_count();
    let reach = game.reachable();
    let mut decides = vec![false; k];
    let mut observed = vec![false; k];
    for v in 0..game.len() {
        if reach[v] {
            observed[game.class_of[v]] = true;
            if game.owners[v] == Player::Eloise {
                decides[game.class_of[v]] = true;
            }
        }
    }
    let deciding: Vec<usize> = (0..k).filter(|&c| decides[c] && !game.class_actions[c].is_empty()).collect();
    let updating: Vec<usize> = (0..k).filter(|&c| observed[c]).collect();
    let per_memory: u128 = deciding
        .iter()
        .map(|&c| game.class_actions[c].len() as u128)
        .fold(1u128, u128::saturating_mul);
    let mut total: u128 = 0;
    for j in 1..=memory as u128 {
        let moves = per_memory.saturating_pow(j as u32);
        let ups = if j > 1 {
            j.saturating_pow((j as u32).saturating_mul(updating.len() as u32))
        } else {
            1
        };
        total = total.saturating_add(moves.saturating_mul(ups));
    }
    check_len("observation strategies", total, guards.strategies)?;

    for j in 1..=memory {
        let mut radices = Vec::new();
        for _ in 0..j {
            radices.extend(deciding.iter().map(|&c| game.class_actions[c].len()));
        }
        let move_digits = radices.len();
        if j > 1 {
            radices.extend(std::iter::repeat(j).take(j * updating.len()));
        }
        let mut digits = vec![0; radices.len()];
        loop {
            let mut sigma = ObsStrategy {
                memory_size: j,
                initial_memory: 0,
                class_count: k,
                up: (0..j * k).map(|i| i / k).collect(),
                moves: vec![None; j * k],
            };
            for m in 0..j {
                for (i, &c) in deciding.iter().enumerate() {
                    sigma.moves[m * k + c] = Some(digits[m * deciding.len() + i]);
                }
                if j > 1 {
                    for (i, &c) in updating.iter().enumerate() {
                        sigma.up[m * k + c] = digits[move_digits + m * updating.len() + i];
                    }
                }
            }
            if verify_obs_strategy(game, &sigma, guards)? {
                return Ok(Some(sigma));
            }
            if !advance(&mut digits, &radices) {
                break;
            }
        }
    }
    Ok(None)
}
