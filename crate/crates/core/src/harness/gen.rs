//! Seeded random instances.

use rand::seq::index::sample;
use rand::Rng;

use crate::condition::{Condition, Flag, StepEvent};
use crate::game::{NatureGame, Owner, Player};
use crate::graph::PointedGraph;
use crate::imperfect::ImperfectArena;
use crate::io::{DeltaADoc, DeltaEDoc, ImperfectDoc, VertexDoc};
use crate::parity::ParityGame;

#[derive(Clone, Debug)]
pub struct GameShape {
    pub max_vertices: usize,
    pub max_priority: u32,
    pub max_nature_degree: usize,
    pub max_player_degree: usize,
    pub owners: Vec<Owner>,
}

impl GameShape {
    /// Three-player games for the cardinality sweeps.
    pub fn cardinality() -> Self {
        GameShape {
            max_vertices: 6,
            max_priority: 3,
            max_nature_degree: 3,
            max_player_degree: 2,
            owners: vec![Owner::Eloise, Owner::Abelard, Owner::Nature],
        }
    }

    /// Eloise-and-Nature games for the topological sweeps.
    pub fn topology() -> Self {
        GameShape {
            max_vertices: 5,
            max_priority: 3,
            max_nature_degree: 2,
            max_player_degree: 2,
            owners: vec![Owner::Eloise, Owner::Nature],
        }
    }
}

fn successors<R: Rng>(rng: &mut R, n: usize, max_degree: usize) -> Vec<usize> {
    let degree = rng.gen_range(1..=max_degree.min(n));
    let mut s = sample(rng, n, degree).into_vec();
    s.sort_unstable();
    s
}

pub fn random_game<R: Rng>(rng: &mut R, shape: &GameShape) -> NatureGame {
    let n = rng.gen_range(1..=shape.max_vertices);
    let owners: Vec<Owner> = (0..n).map(|_| shape.owners[rng.gen_range(0..shape.owners.len())]).collect();
    let succ = owners
        .iter()
        .map(|o| {
            let max = if *o == Owner::Nature {
                shape.max_nature_degree
            } else {
                shape.max_player_degree
            };
            successors(rng, n, max)
        })
        .collect();
    let priorities = (0..n).map(|_| rng.gen_range(0..=shape.max_priority)).collect();
    NatureGame::from_parts((0..n).map(|v| format!("v{v}")).collect(), owners, succ, priorities, 0)
        .expect("generated games are valid")
}

pub fn random_parity_game<R: Rng>(rng: &mut R, max_vertices: usize, max_priority: u32) -> ParityGame {
    let n = rng.gen_range(1..=max_vertices);
    let owners = (0..n)
        .map(|_| if rng.gen_bool(0.5) { Player::Eloise } else { Player::Abelard })
        .collect();
    let succ = (0..n).map(|_| successors(rng, n, 3)).collect();
    let priorities = (0..n).map(|_| rng.gen_range(0..=max_priority)).collect();
    ParityGame::new((0..n).map(|v| format!("v{v}")).collect(), owners, succ, priorities, 0)
        .expect("generated games are valid")
}

pub fn random_graph<R: Rng>(rng: &mut R, max_vertices: usize, max_priority: u32) -> PointedGraph {
    let n = rng.gen_range(1..=max_vertices);
    let succ = (0..n).map(|_| successors(rng, n, n)).collect();
    let priorities = (0..n).map(|_| rng.gen_range(0..=max_priority)).collect();
    PointedGraph::new(succ, priorities, 0).expect("generated graphs are valid")
}

/// Every graph on `n` vertices (nonempty successor sets, priorities up to
/// `max_priority`) pointed at vertex 0, in a fixed order.
pub fn all_graphs(n: usize, max_priority: u32) -> Vec<PointedGraph> {
    let sets: Vec<Vec<usize>> = (1..1usize << n)
        .map(|mask| (0..n).filter(|b| mask >> b & 1 == 1).collect())
        .collect();
    let mut out = Vec::new();
    let choices = sets.len().pow(n as u32);
    let colourings = (max_priority as usize + 1).pow(n as u32);
    for c in 0..choices {
        let succ: Vec<Vec<usize>> = (0..n).map(|v| sets[c / sets.len().pow(v as u32) % sets.len()].clone()).collect();
        for p in 0..colourings {
            let base = max_priority as usize + 1;
            let priorities = (0..n).map(|v| (p / base.pow(v as u32) % base) as u32).collect();
            out.push(PointedGraph::new(succ.clone(), priorities, 0).expect("valid"));
        }
    }
    out
}

fn random_event<R: Rng>(rng: &mut R, condition: Condition, d: u32, must_enter: bool) -> StepEvent {
    let c = rng.gen_range(0..=d);
    match condition {
        Condition::Hat => match rng.gen_range(0..if must_enter { 3 } else { 4 }) {
            0 => StepEvent::enter(c),
            1 => StepEvent::flagged(c, Flag::Obey),
            2 => StepEvent::flagged(c, Flag::Disobey),
            _ => StepEvent::gadget(),
        },
        Condition::Check => match rng.gen_range(0..if must_enter { 2 } else { 3 }) {
            0 => StepEvent::enter(c),
            1 => StepEvent::flagged(c, Flag::Zero),
            _ => StepEvent::gadget(),
        },
        Condition::Tilde => unreachable!("tilde lassos are built in rounds"),
    }
}

/// A lasso of legal events with `|handle| + |loop| ≤ max_len`; the loop
/// enters at least one vertex, as every cycle of a reduced game does. Tilde
/// lassos alternate Eloise steps (top/bot) and Abelard steps
/// (deviate/follow), as plays of the tilde game do.
pub fn random_lasso<R: Rng>(
    rng: &mut R,
    condition: Condition,
    d: u32,
    max_len: usize,
) -> (Vec<StepEvent>, Vec<StepEvent>) {
    if condition == Condition::Tilde {
        let rounds = |rng: &mut R, k: usize| -> Vec<StepEvent> {
            (0..k)
                .flat_map(|_| {
                    let e = if rng.gen_bool(0.5) { Flag::Top } else { Flag::Bot };
                    let a = if rng.gen_bool(0.5) { Flag::Deviate } else { Flag::Follow };
                    [
                        StepEvent::flagged(rng.gen_range(0..=d), e),
                        StepEvent::flagged(rng.gen_range(0..=d), a),
                    ]
                })
                .collect()
        };
        let loop_rounds = rng.gen_range(1..=max_len / 2);
        let handle_rounds = rng.gen_range(0..=max_len / 2 - loop_rounds);
        return (rounds(rng, handle_rounds), rounds(rng, loop_rounds));
    }
    let loop_len = rng.gen_range(1..=max_len);
    let handle_len = rng.gen_range(0..=max_len - loop_len);
    let handle = (0..handle_len).map(|_| random_event(rng, condition, d, false)).collect();
    let mut lp: Vec<StepEvent> = (0..loop_len).map(|_| random_event(rng, condition, d, false)).collect();
    if lp.iter().all(|e| e.entered.is_none()) {
        let i = rng.gen_range(0..loop_len);
        lp[i] = random_event(rng, condition, d, true);
    }
    (handle, lp)
}

/// An imperfect arena with at most `max_vertices` vertices, `max_actions`
/// actions and at most two observation classes of size two or more.
pub fn random_imperfect<R: Rng>(rng: &mut R, max_vertices: usize, max_actions: usize) -> ImperfectArena {
    let n = rng.gen_range(2..=max_vertices);
    let k = rng.gen_range(1..=max_actions);
    let actions: Vec<String> = (0..k).map(|a| format!("a{a}")).collect();
    let owners: Vec<Owner> = (0..n)
        .map(|_| if rng.gen_bool(0.7) { Owner::Eloise } else { Owner::Abelard })
        .collect();
    let mut priorities: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
    let id = |v: usize| format!("v{v}");
    let ids = |s: Vec<usize>| s.into_iter().map(id).collect::<Vec<_>>();

    let mut observations = Vec::new();
    let mut free: Vec<usize> = (0..n).collect();
    for _ in 0..2 {
        let owner = if rng.gen_bool(0.8) { Owner::Eloise } else { Owner::Abelard };
        let pool: Vec<usize> = free.iter().copied().filter(|&v| owners[v] == owner).collect();
        if pool.len() < 2 {
            continue;
        }
        let size = rng.gen_range(2..=pool.len().min(3));
        let mut class: Vec<usize> = sample(rng, pool.len(), size).into_iter().map(|i| pool[i]).collect();
        class.sort_unstable();
        let p = priorities[class[0]];
        for &v in &class {
            priorities[v] = p;
        }
        free.retain(|v| !class.contains(v));
        observations.push(ids(class));
    }

    let mut delta_e = Vec::new();
    let mut delta_a = Vec::new();
    for v in 0..n {
        match owners[v] {
            Owner::Abelard => delta_a.push(DeltaADoc {
                from: id(v),
                to: ids(successors(rng, n, 2)),
            }),
            _ => {
                let forced = rng.gen_range(0..k);
                for (a, name) in actions.iter().enumerate() {
                    if a == forced || rng.gen_bool(0.6) {
                        delta_e.push(DeltaEDoc {
                            from: id(v),
                            action: name.clone(),
                            to: ids(successors(rng, n, 2)),
                        });
                    }
                }
            }
        }
    }
    let doc = ImperfectDoc {
        vertices: (0..n)
            .map(|v| VertexDoc {
                id: id(v),
                owner: Some(owners[v]),
                priority: priorities[v],
            })
            .collect(),
        actions,
        delta_e,
        delta_a,
        observations,
        initial: id(0),
    };
    ImperfectArena::from_doc(&doc).expect("generated arenas are valid")
}
