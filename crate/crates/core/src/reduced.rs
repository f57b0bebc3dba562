//! Reduced games: event-annotated two-player games together with the roles
//! of their vertices in the source game, and the folding of a positional
//! product strategy back into a Moore strategy on the source.

use std::collections::{HashMap, HashSet};

use serde_json::{json, Value};

use crate::condition::{product, Condition, EventGame, PriorityTransducer, ProductGame};
use crate::error::{Error, Result};
use crate::game::{Arena, MooreStrategy, NatureGame, Owner, Player};
use crate::guard::Guards;
use crate::parity::{solve_parity, SolveResult};

/// What a reduced vertex stands for. Vertex arguments index the source game.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Original(usize),
    /// Eloise asked Abelard to avoid `avoid` at Nature vertex `nature`.
    AvoidChoice { nature: usize, avoid: usize },
    Start,
    /// `vertex` with `budget` losing plays left to claim.
    Budget { vertex: usize, budget: u32 },
    /// Abelard moved to `vertex`; Eloise lowers the budget.
    Query { vertex: usize, budget: u32 },
    /// Split of the budget over the successors of Nature vertex `nature`.
    Distribution { nature: usize, values: Vec<u32> },
    /// Eloise moved to Nature vertex `nature`, pointing at `toward`, with the
    /// marker flag `top`.
    Direction { nature: usize, toward: usize, top: bool },
}

impl Role {
    pub fn kind(&self) -> &'static str {
        match self {
            Role::Original(_) => "original",
            Role::AvoidChoice { .. } => "avoid-choice",
            Role::Start => "start",
            Role::Budget { .. } => "budget",
            Role::Query { .. } => "query",
            Role::Distribution { .. } => "distribution",
            Role::Direction { .. } => "direction",
        }
    }

    /// The source vertex a play sits on when it is at this reduced vertex.
    pub fn source_vertex(&self) -> Option<usize> {
        match *self {
            Role::Original(v) | Role::Budget { vertex: v, .. } => Some(v),
            Role::AvoidChoice { nature, .. } | Role::Direction { nature, .. } | Role::Distribution { nature, .. } => {
                Some(nature)
            }
            Role::Query { vertex, .. } => Some(vertex),
            Role::Start => None,
        }
    }
}

/// Where a reduced edge comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeOrigin {
    /// Realizes the source edge.
    Source(usize, usize),
    /// Internal to a gadget (announcement, budget bookkeeping, start).
    Gadget,
}

#[derive(Clone, Debug)]
pub struct ReducedGame {
    pub condition: Condition,
    pub events: EventGame,
    pub roles: Vec<Role>,
    /// Largest priority of the source game.
    pub max_priority: u32,
}

impl ReducedGame {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.events.edge_count()
    }

    pub fn count_owned(&self, p: Player) -> usize {
        self.events.owners.iter().filter(|&&o| o == p).count()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.events.edges.iter().enumerate().flat_map(|(v, s)| s.iter().map(move |&(w, _)| (v, w)))
    }

    /// Back-map of a reduced edge; `None` if it is not an edge.
    pub fn edge_origin(&self, from: usize, to: usize) -> Option<EdgeOrigin> {
        self.events.event(from, to)?;
        use Role::*;
        Some(match (&self.roles[from], &self.roles[to]) {
            (Original(v), Original(w)) => EdgeOrigin::Source(*v, *w),
            (Original(_), AvoidChoice { .. }) => EdgeOrigin::Gadget,
            (AvoidChoice { nature, .. }, Original(w)) => EdgeOrigin::Source(*nature, *w),
            (Start, _) => EdgeOrigin::Gadget,
            (Budget { vertex: v, .. }, Budget { vertex: w, .. }) => EdgeOrigin::Source(*v, *w),
            (Budget { vertex: v, .. }, Query { vertex: w, .. }) => EdgeOrigin::Source(*v, *w),
            (Query { .. }, Budget { .. }) => EdgeOrigin::Gadget,
            (Budget { .. }, Distribution { .. }) => EdgeOrigin::Gadget,
            (Distribution { nature, .. }, Budget { vertex: w, .. }) => EdgeOrigin::Source(*nature, *w),
            (Original(v), Direction { nature, .. }) => EdgeOrigin::Source(*v, *nature),
            (Direction { nature, .. }, Original(w)) => EdgeOrigin::Source(*nature, *w),
            _ => return None,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "condition": self.condition.name(),
            "vertices": self.len(),
            "edges": self.edge_count(),
            "eloise_vertices": self.count_owned(Player::Eloise),
            "abelard_vertices": self.count_owned(Player::Abelard),
        })
    }
}

/// A Moore strategy pulled back to a source game, with readable memory names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PulledBack {
    pub strategy: MooreStrategy,
    pub memory_labels: Vec<String>,
}

/// Outcome of a reduction-based decision procedure.
#[derive(Clone, Debug)]
pub struct Decision {
    pub holds: bool,
    pub strategy: Option<PulledBack>,
    pub reduced: ReducedGame,
    pub product: ProductGame,
    pub solution: SolveResult,
}

impl Decision {
    pub fn provenance(&self) -> Value {
        json!({
            "reduced": self.reduced.to_json(),
            "product_vertices": self.product.game.len(),
            "product_states": self.product.main_count(),
            "transducer_states": self.product.transducer_states_used(),
        })
    }

    /// The solved product as a parity-game document annotated with its
    /// provenance.
    pub fn product_doc(&self) -> crate::io::GameDoc {
        let mut doc = self.product.game.to_doc();
        doc.provenance = Some(self.provenance());
        doc
    }
}

/// Builds the product of `reduced` with `t`, solves it, and on an Eloise win
/// pulls her strategy back with `pull`.
pub(crate) fn decide_with(
    reduced: ReducedGame,
    t: &PriorityTransducer,
    guards: &Guards,
    pull: impl FnOnce(&ReducedGame, &ProductGame, &[Option<usize>]) -> Result<PulledBack>,
) -> Result<Decision> {
    let product = product(&reduced.events, t, guards)?;
    let solution = solve_parity(&product.game);
    let holds = solution.winner == Player::Eloise;
    let strategy = if holds {
        Some(pull(&reduced, &product, &solution.eloise)?)
    } else {
        None
    };
    Ok(Decision {
        holds,
        strategy,
        reduced,
        product,
        solution,
    })
}

/// Turns a simulation of the reduced game into a Moore strategy on `source`.
/// Memory states are simulation keys (each tied to one source vertex);
/// `choose` gives Eloise's move at a key, `advance` the key after the source
/// move `vertex -> next`.
pub(crate) fn fold_into_moore(
    source: &NatureGame,
    initial_key: usize,
    mut choose: impl FnMut(usize, usize) -> Result<usize>,
    mut advance: impl FnMut(usize, usize, usize) -> Result<usize>,
    label: impl Fn(usize) -> String,
) -> Result<PulledBack> {
    let n = source.len();
    let mut memory: Vec<(usize, usize)> = vec![(initial_key, source.initial())];
    let mut index: HashMap<usize, usize> = HashMap::from([(initial_key, 0)]);
    let mut up: Vec<Vec<usize>> = Vec::new();
    let mut moves: Vec<Vec<Option<usize>>> = Vec::new();
    let mut i = 0;
    while i < memory.len() {
        let (key, v) = memory[i];
        let mut up_row: Vec<usize> = vec![i; n];
        let mut move_row: Vec<Option<usize>> = vec![None; n];
        let nexts: Vec<usize> = if source.owner(v) == Owner::Eloise {
            let w = choose(key, v)?;
            if !source.successors(v).contains(&w) {
                return Err(Error::InvalidStrategy(format!(
                    "pulled-back move {} -> {} is not an edge",
                    source.id(v),
                    source.id(w)
                )));
            }
            move_row[v] = Some(w);
            vec![w]
        } else {
            source.successors(v).to_vec()
        };
        for w in nexts {
            let k = advance(key, v, w)?;
            let m = match index.get(&k) {
                Some(&m) => m,
                None => {
                    memory.push((k, w));
                    index.insert(k, memory.len() - 1);
                    memory.len() - 1
                }
            };
            if memory[m].1 != w {
                return Err(Error::InvalidStrategy("simulation key reused on another vertex".into()));
            }
            up_row[w] = m;
        }
        up.push(up_row);
        moves.push(move_row);
        i += 1;
    }
    // Moves off the memory's own vertex never happen; copy a representative so
    // that tables read uniformly.
    let mut representative: Vec<Option<usize>> = vec![None; n];
    let mut covered = HashSet::new();
    for (m, &(_, v)) in memory.iter().enumerate() {
        if source.owner(v) == Owner::Eloise && covered.insert(v) {
            representative[v] = moves[m][v];
        }
    }
    for row in &mut moves {
        for u in source.vertices_of(Owner::Eloise) {
            if row[u].is_none() {
                row[u] = Some(representative[u].unwrap_or(source.successors(u)[0]));
            }
        }
    }
    let labels = memory.iter().map(|&(k, _)| label(k)).collect();
    Ok(PulledBack {
        strategy: MooreStrategy::new(Player::Eloise, 0, up, moves)?,
        memory_labels: labels,
    })
}
