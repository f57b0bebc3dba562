//! Deterministic priority transducers for the three composite winning
//! conditions of the reduced games, and the product of an event-annotated
//! game with a transducer.
//!
//! Every transducer emits one priority per step; a play satisfies the
//! composite condition iff the least priority emitted infinitely often is
//! even. Neutral emissions sit strictly above the largest game priority `d`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::game::Player;
use crate::guard::{self, Guards};
use crate::parity::ParityGame;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flag {
    Obey,
    Disobey,
    Top,
    Bot,
    Deviate,
    Follow,
    Zero,
}

impl Flag {
    pub fn name(self) -> &'static str {
        match self {
            Flag::Obey => "obey",
            Flag::Disobey => "disobey",
            Flag::Top => "top",
            Flag::Bot => "bot",
            Flag::Deviate => "deviate",
            Flag::Follow => "follow",
            Flag::Zero => "zero",
        }
    }
}

/// What a single move reveals to the transducer: the priority of the entered
/// vertex (absent when entering a gadget vertex) and an optional flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StepEvent {
    pub entered: Option<u32>,
    pub flag: Option<Flag>,
}

impl StepEvent {
    pub fn enter(priority: u32) -> Self {
        StepEvent {
            entered: Some(priority),
            flag: None,
        }
    }

    pub fn gadget() -> Self {
        StepEvent {
            entered: None,
            flag: None,
        }
    }

    pub fn flagged(priority: u32, flag: Flag) -> Self {
        StepEvent {
            entered: Some(priority),
            flag: Some(flag),
        }
    }

    pub fn has(&self, flag: Flag) -> bool {
        self.flag == Some(flag)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    /// Parity, or Abelard obeys only finitely often.
    Hat,
    /// Parity, or no zero-budget vertex is ever entered.
    Check,
    /// Parity with infinitely many tops, or finitely many tops and
    /// infinitely many deviations.
    Tilde,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::Hat => "hat",
            Condition::Check => "check",
            Condition::Tilde => "tilde",
        }
    }
}

/// States are small integers. For hat and tilde, state `s ≤ d` records the
/// least priority since the last reset and `d + 1` means nothing recorded;
/// for check, state 1 means a zero-event has happened.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PriorityTransducer {
    condition: Condition,
    d: u32,
}

pub fn compile_hat(d: u32) -> PriorityTransducer {
    PriorityTransducer {
        condition: Condition::Hat,
        d,
    }
}

pub fn compile_check(d: u32) -> PriorityTransducer {
    PriorityTransducer {
        condition: Condition::Check,
        d,
    }
}

pub fn compile_tilde(d: u32) -> PriorityTransducer {
    PriorityTransducer {
        condition: Condition::Tilde,
        d,
    }
}

impl PriorityTransducer {
    pub fn condition(&self) -> Condition {
        self.condition
    }

    pub fn max_priority(&self) -> u32 {
        self.d
    }

    /// Smallest even number above `d`.
    pub fn neutral(&self) -> u32 {
        if self.d % 2 == 0 {
            self.d + 2
        } else {
            self.d + 1
        }
    }

    pub fn max_emission(&self) -> u32 {
        match self.condition {
            Condition::Hat | Condition::Check => self.neutral(),
            Condition::Tilde => self.neutral() + 2,
        }
    }

    pub fn state_count(&self) -> usize {
        match self.condition {
            Condition::Hat | Condition::Tilde => self.d as usize + 2,
            Condition::Check => 2,
        }
    }

    fn empty(&self) -> u32 {
        self.d + 1
    }

    pub fn initial_state(&self) -> u32 {
        match self.condition {
            Condition::Hat | Condition::Tilde => self.empty(),
            Condition::Check => 0,
        }
    }

    /// Initial state when the play starts on a vertex of priority `seed`.
    pub fn seeded(&self, seed: Option<u32>) -> u32 {
        match (self.condition, seed) {
            (Condition::Hat | Condition::Tilde, Some(c)) => c.min(self.empty()),
            _ => self.initial_state(),
        }
    }

    pub fn state_label(&self, s: u32) -> String {
        match self.condition {
            Condition::Hat | Condition::Tilde if s == self.empty() => "-".into(),
            _ => s.to_string(),
        }
    }

    fn illegal(&self, detail: String) -> Error {
        Error::IllegalEvent {
            condition: self.condition.name(),
            detail,
        }
    }

    /// One step: the successor state and the emitted priority.
    pub fn step(&self, state: u32, ev: &StepEvent) -> Result<(u32, u32)> {
        if let Some(c) = ev.entered {
            if c > self.d {
                return Err(self.illegal(format!("priority {c} exceeds {}", self.d)));
            }
        }
        if state as usize >= self.state_count() {
            return Err(self.illegal(format!("state {state} out of range")));
        }
        let n = self.neutral();
        let min = |s: u32| ev.entered.map_or(s, |c| c.min(s));
        match self.condition {
            Condition::Hat => match ev.flag {
                None if ev.entered.is_some() => Ok((min(state), n)),
                None => Ok((state, n)),
                Some(Flag::Obey) if ev.entered.is_some() => Ok((self.empty(), min(state))),
                Some(Flag::Disobey) if ev.entered.is_some() => Ok((min(state), n)),
                other => Err(self.illegal(format!("{:?} with entered {:?}", other, ev.entered))),
            },
            Condition::Check => match ev.flag {
                None => {
                    let e = if state == 1 { ev.entered.unwrap_or(n) } else { n };
                    Ok((state, e))
                }
                Some(Flag::Zero) => match ev.entered {
                    Some(c) => Ok((1, c)),
                    None => Err(self.illegal("zero-event on a gadget step".into())),
                },
                Some(f) => Err(self.illegal(format!("flag {}", f.name()))),
            },
            Condition::Tilde => {
                if ev.entered.is_none() {
                    return Err(self.illegal("every step enters a vertex".into()));
                }
                let m = min(state);
                match ev.flag {
                    Some(Flag::Top) => Ok((self.empty(), m)),
                    Some(Flag::Bot) => Ok((m, n + 2)),
                    Some(Flag::Deviate) => Ok((m, n)),
                    Some(Flag::Follow) => Ok((m, n + 1)),
                    other => Err(self.illegal(format!("flag {other:?}"))),
                }
            }
        }
    }
}

/// Whether the least priority emitted infinitely often along
/// `handle · loop^ω` (from the unseeded initial state) is even.
pub fn eval_on_lasso(t: &PriorityTransducer, handle: &[StepEvent], lp: &[StepEvent]) -> Result<bool> {
    if lp.is_empty() {
        return Err(Error::Precondition("lasso loop must be nonempty".into()));
    }
    let mut s = t.initial_state();
    for ev in handle {
        s = t.step(s, ev)?.0;
    }
    let mut first_seen: HashMap<u32, usize> = HashMap::new();
    let mut round_min: Vec<u32> = Vec::new();
    loop {
        if let Some(&i) = first_seen.get(&s) {
            let liminf = round_min[i..].iter().copied().min().expect("at least one round");
            return Ok(liminf % 2 == 0);
        }
        first_seen.insert(s, round_min.len());
        let mut m = u32::MAX;
        for ev in lp {
            let (next, e) = t.step(s, ev)?;
            s = next;
            m = m.min(e);
        }
        round_min.push(m);
    }
}

/// A two-player game whose edges carry step events; the input of [`product`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventGame {
    pub ids: Vec<String>,
    pub owners: Vec<Player>,
    pub edges: Vec<Vec<(usize, StepEvent)>>,
    pub initial: usize,
    /// Priority of the initial vertex if it is an original vertex.
    pub initial_priority: Option<u32>,
}

impl EventGame {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn event(&self, from: usize, to: usize) -> Option<StepEvent> {
        self.edges[from].iter().find(|(w, _)| *w == to).map(|&(_, e)| e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductNode {
    /// (event-game vertex, transducer state)
    Main { vertex: usize, state: u32 },
    /// Subdivision vertex of the product edge `from -> to`, carrying its
    /// emission as priority.
    Edge { from: usize, to: usize, emitted: u32 },
}

/// The parity game obtained from an event game and a transducer: product
/// states, with each product edge subdivided by a vertex carrying the edge's
/// emission. Product states get the smallest even priority above every
/// emission, which never decides a liminf since emissions recur.
#[derive(Clone, Debug)]
pub struct ProductGame {
    pub game: ParityGame,
    pub nodes: Vec<ProductNode>,
    pub transducer: PriorityTransducer,
}

impl ProductGame {
    pub fn main_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, ProductNode::Main { .. })).count()
    }

    /// Distinct transducer states among reachable product states.
    pub fn transducer_states_used(&self) -> usize {
        let mut s: Vec<u32> = self
            .nodes
            .iter()
            .filter_map(|n| match n {
                ProductNode::Main { state, .. } => Some(*state),
                _ => None,
            })
            .collect();
        s.sort_unstable();
        s.dedup();
        s.len()
    }

    pub fn vertex_of(&self, pv: usize) -> Option<usize> {
        match self.nodes[pv] {
            ProductNode::Main { vertex, .. } => Some(vertex),
            ProductNode::Edge { .. } => None,
        }
    }

    /// Product state reached from main state `pv` through the subdivision
    /// vertex `mid`.
    fn through(&self, mid: usize) -> usize {
        match self.nodes[mid] {
            ProductNode::Edge { to, .. } => to,
            ProductNode::Main { .. } => mid,
        }
    }

    /// The main state chosen at `pv` by the positional `moves`.
    pub fn step(&self, pv: usize, moves: &[Option<usize>]) -> Result<usize> {
        let mid = moves[pv].ok_or_else(|| {
            Error::InvalidStrategy(format!("no move at reachable product state {}", crate::game::Arena::id(&self.game, pv)))
        })?;
        Ok(self.through(mid))
    }

    /// The unique main successor of `pv` whose event-game vertex satisfies `pred`.
    pub fn follow(&self, pv: usize, pred: impl Fn(usize) -> bool) -> Result<usize> {
        self.game.adjacency()[pv]
            .iter()
            .map(|&mid| self.through(mid))
            .find(|&t| self.vertex_of(t).is_some_and(&pred))
            .ok_or_else(|| Error::InvalidStrategy("no product successor matches the source move".into()))
    }
}

pub fn product(eg: &EventGame, t: &PriorityTransducer, guards: &Guards) -> Result<ProductGame> {
    let s0 = t.seeded(eg.initial_priority);
    let mut nodes = vec![ProductNode::Main {
        vertex: eg.initial,
        state: s0,
    }];
    let mut index: HashMap<(usize, u32), usize> = HashMap::from([((eg.initial, s0), 0)]);
    let mut succ: Vec<Vec<usize>> = vec![Vec::new()];
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let pv = queue[head];
        head += 1;
        let ProductNode::Main { vertex, state } = nodes[pv] else {
            unreachable!()
        };
        for &(w, ev) in &eg.edges[vertex] {
            let (s, e) = t.step(state, &ev)?;
            let target = match index.get(&(w, s)) {
                Some(&i) => i,
                None => {
                    let i = nodes.len();
                    nodes.push(ProductNode::Main { vertex: w, state: s });
                    succ.push(Vec::new());
                    index.insert((w, s), i);
                    queue.push(i);
                    i
                }
            };
            let mid = nodes.len();
            nodes.push(ProductNode::Edge {
                from: pv,
                to: target,
                emitted: e,
            });
            succ.push(vec![target]);
            succ[pv].push(mid);
            guard::check("product states", nodes.len() as u128, guards.states)?;
        }
    }
    let top = nodes
        .iter()
        .filter_map(|n| match n {
            ProductNode::Edge { emitted, .. } => Some(*emitted),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let main_priority = if top % 2 == 0 { top + 2 } else { top + 1 };
    let main_id = |vertex: usize, state: u32| format!("{}@{}", eg.ids[vertex], t.state_label(state));
    let ids: Vec<String> = nodes
        .iter()
        .map(|n| match *n {
            ProductNode::Main { vertex, state } => main_id(vertex, state),
            ProductNode::Edge { from, to, .. } => {
                let name = |i: usize| match nodes[i] {
                    ProductNode::Main { vertex, state } => main_id(vertex, state),
                    _ => unreachable!(),
                };
                format!("{}>{}", name(from), name(to))
            }
        })
        .collect();
    let owners = nodes
        .iter()
        .map(|n| match *n {
            ProductNode::Main { vertex, .. } => eg.owners[vertex],
            ProductNode::Edge { .. } => Player::Eloise,
        })
        .collect();
    let priorities = nodes
        .iter()
        .map(|n| match *n {
            ProductNode::Main { .. } => main_priority,
            ProductNode::Edge { emitted, .. } => emitted,
        })
        .collect();
    Ok(ProductGame {
        game: ParityGame::new(ids, owners, succ, priorities, 0)?,
        nodes,
        transducer: *t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parity::solve_parity;

    fn e(c: u32) -> StepEvent {
        StepEvent::enter(c)
    }
    fn f(c: u32, fl: Flag) -> StepEvent {
        StepEvent::flagged(c, fl)
    }

    #[test]
    fn hat_rows() {
        let t = compile_hat(1);
        assert_eq!(t.neutral(), 2);
        let g = StepEvent::gadget();
        assert!(eval_on_lasso(&t, &[], &[e(1), g, f(0, Flag::Obey)]).unwrap());
        assert!(!eval_on_lasso(&t, &[], &[e(1), g, f(1, Flag::Obey)]).unwrap());
        assert!(eval_on_lasso(&t, &[f(1, Flag::Obey)], &[e(1), g, f(1, Flag::Disobey)]).unwrap());
        assert!(t.step(0, &f(0, Flag::Top)).is_err());
        assert!(t.step(0, &e(2)).is_err());
    }

    #[test]
    fn check_rows() {
        let t = compile_check(1);
        assert!(eval_on_lasso(&t, &[], &[e(1)]).unwrap());
        assert!(!eval_on_lasso(&t, &[f(1, Flag::Zero)], &[e(1)]).unwrap());
        assert!(eval_on_lasso(&t, &[f(1, Flag::Zero)], &[e(0)]).unwrap());
        assert!(t.step(0, &f(0, Flag::Obey)).is_err());
        assert_eq!(t.state_count(), 2);
    }

    #[test]
    fn tilde_rows() {
        let t = compile_tilde(1);
        assert!(eval_on_lasso(&t, &[], &[f(0, Flag::Top), f(1, Flag::Follow)]).unwrap());
        assert!(eval_on_lasso(&t, &[], &[f(1, Flag::Bot), f(1, Flag::Deviate)]).unwrap());
        assert!(!eval_on_lasso(&t, &[], &[f(1, Flag::Bot), f(1, Flag::Follow)]).unwrap());
        assert_eq!(t.step(2, &f(1, Flag::Follow)).unwrap(), (1, 3));
        assert!(t.step(0, &StepEvent::gadget()).is_err());
    }

    fn self_loop(ev: StepEvent) -> EventGame {
        EventGame {
            ids: vec!["x".into()],
            owners: vec![Player::Eloise],
            edges: vec![vec![(0, ev)]],
            initial: 0,
            initial_priority: ev.entered,
        }
    }

    #[test]
    fn product_of_self_loops() {
        let t = compile_hat(1);
        let p = product(&self_loop(e(0)), &t, &Guards::default()).unwrap();
        assert_eq!(solve_parity(&p.game).winner, Player::Eloise);
        let p = product(&self_loop(f(1, Flag::Obey)), &t, &Guards::default()).unwrap();
        assert_eq!(solve_parity(&p.game).winner, Player::Abelard);
    }

    #[test]
    fn illegal_event_in_product() {
        let t = compile_tilde(1);
        assert!(product(&self_loop(e(0)), &t, &Guards::default()).is_err());
    }
}
