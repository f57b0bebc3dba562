//! Cardinality questions: can Eloise keep the set of plays she loses
//! countable, or of size at most `k`? Both reduce to two-player games.
//!
//! Avoid game: at each Nature vertex Eloise names a successor for Abelard to
//! avoid; Abelard then resolves Nature's move, obeying when he avoids it.
//! Eloise wins if the play satisfies parity or Abelard obeys only finitely
//! often.
//!
//! Budget game: Eloise carries a claimed number of losing plays. At Nature
//! vertices she splits the claim among successors and Abelard picks one; at
//! Abelard vertices she may lower it. She wins if the play satisfies parity
//! or never reaches a zero claim.

use crate::condition::{compile_check, compile_hat, Condition, EventGame, Flag, StepEvent};
use crate::error::Result;
use crate::game::{Arena, NatureGame, Owner, Player};
use crate::guard::{self, Guards};
use crate::reduced::{decide_with, fold_into_moore, Decision, PulledBack, ReducedGame, Role};
use crate::condition::ProductGame;

fn unique(taken: &mut std::collections::HashSet<String>, mut id: String) -> String {
    while !taken.insert(id.clone()) {
        id.push('\'');
    }
    id
}

fn player_of(o: Owner) -> Player {
    match o {
        Owner::Abelard => Player::Abelard,
        Owner::Eloise | Owner::Nature => Player::Eloise,
    }
}

/// The avoid game. Source vertices keep their indices; Nature vertices pass to
/// Eloise and each Nature edge `(v, w)` gets an Abelard vertex.
pub fn build_hat(g: &NatureGame) -> ReducedGame {
    let n = g.len();
    let mut taken: std::collections::HashSet<String> = g.ids().iter().cloned().collect();
    let mut ids: Vec<String> = g.ids().to_vec();
    let mut owners: Vec<Player> = g.owners().iter().map(|&o| player_of(o)).collect();
    let mut roles: Vec<Role> = (0..n).map(Role::Original).collect();
    let mut edges: Vec<Vec<(usize, StepEvent)>> = vec![Vec::new(); n];
    for v in 0..n {
        if g.owner(v) != Owner::Nature {
            edges[v] = g.successors(v).iter().map(|&w| (w, StepEvent::enter(g.priority(w)))).collect();
            continue;
        }
        for &w in g.successors(v) {
            let gv = ids.len();
            ids.push(unique(&mut taken, format!("({},{})", g.id(v), g.id(w))));
            owners.push(Player::Abelard);
            roles.push(Role::AvoidChoice { nature: v, avoid: w });
            edges[v].push((gv, StepEvent::gadget()));
            edges.push(
                g.successors(v)
                    .iter()
                    .map(|&x| {
                        let flag = if x != w { Flag::Obey } else { Flag::Disobey };
                        (x, StepEvent::flagged(g.priority(x), flag))
                    })
                    .collect(),
            );
        }
    }
    ReducedGame {
        condition: Condition::Hat,
        events: EventGame {
            ids,
            owners,
            edges,
            initial: g.initial(),
            initial_priority: Some(g.priority(g.initial())),
        },
        roles,
        max_priority: g.max_priority(),
    }
}

/// Value vectors of length `len` over `0..=k` with sum at most `k`, in
/// lexicographic order.
fn distributions(len: usize, k: u32) -> Vec<Vec<u32>> {
    fn go(len: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for x in 0..=left {
            cur.push(x);
            go(len, left - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(len, k, &mut Vec::new(), &mut out);
    out
}

fn binomial(n: u128, r: u128) -> u128 {
    (0..r).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// The budget game for claim bound `k`. Query vertices exist for every
/// successor of an Abelard vertex; distribution vertices are keyed by their
/// Nature vertex.
pub fn build_check(g: &NatureGame, k: u32, guards: &Guards) -> Result<ReducedGame> {
    let n = g.len();
    let dist_count: u128 = g
        .vertices_of(Owner::Nature)
        .map(|v| {
            let s = g.successors(v).len() as u128;
            binomial(k as u128 + s, s)
        })
        .fold(0u128, u128::saturating_add);
    guard::check("budget distributions", dist_count, guards.distributions)?;

    let kk = k as usize + 1;
    let mut taken = std::collections::HashSet::new();
    let mut ids = vec![unique(&mut taken, "s".into())];
    let mut owners = vec![Player::Eloise];
    let mut roles = vec![Role::Start];
    let budget = |v: usize, i: u32| 1 + v * kk + i as usize;
    for v in 0..n {
        for i in 0..=k {
            ids.push(unique(&mut taken, format!("({},{i})", g.id(v))));
            owners.push(player_of(g.owner(v)));
            roles.push(Role::Budget { vertex: v, budget: i });
        }
    }
    let mut queried: Vec<usize> = g
        .vertices_of(Owner::Abelard)
        .flat_map(|v| g.successors(v).iter().copied())
        .collect();
    queried.sort_unstable();
    queried.dedup();
    let query_base = ids.len();
    let query = |w: usize, i: u32| query_base + queried.binary_search(&w).expect("queried") * kk + i as usize;
    for &w in &queried {
        for i in 0..=k {
            ids.push(unique(&mut taken, format!("({},{i},?)", g.id(w))));
            owners.push(Player::Eloise);
            roles.push(Role::Query { vertex: w, budget: i });
        }
    }
    let mut dist_of: Vec<Vec<(usize, Vec<u32>)>> = vec![Vec::new(); n];
    for v in g.vertices_of(Owner::Nature) {
        for values in distributions(g.successors(v).len(), k) {
            let parts: Vec<String> = g
                .successors(v)
                .iter()
                .zip(&values)
                .map(|(&w, x)| format!("{}:{x}", g.id(w)))
                .collect();
            dist_of[v].push((ids.len(), values.clone()));
            ids.push(unique(&mut taken, format!("mu[{}]({})", g.id(v), parts.join(","))));
            owners.push(Player::Abelard);
            roles.push(Role::Distribution { nature: v, values });
        }
    }

    let enter = |w: usize, i: u32| {
        if i == 0 {
            StepEvent::flagged(g.priority(w), Flag::Zero)
        } else {
            StepEvent::enter(g.priority(w))
        }
    };
    let mut edges: Vec<Vec<(usize, StepEvent)>> = vec![Vec::new(); ids.len()];
    let v0 = g.initial();
    edges[0] = (0..=k).map(|i| (budget(v0, i), enter(v0, i))).collect();
    for v in 0..n {
        for i in 0..=k {
            let from = budget(v, i);
            edges[from] = match g.owner(v) {
                Owner::Eloise => g.successors(v).iter().map(|&w| (budget(w, i), enter(w, i))).collect(),
                Owner::Abelard => g.successors(v).iter().map(|&w| (query(w, i), StepEvent::gadget())).collect(),
                Owner::Nature => dist_of[v]
                    .iter()
                    .filter(|(_, vals)| vals.iter().sum::<u32>() == i)
                    .map(|&(d, _)| (d, StepEvent::gadget()))
                    .collect(),
            };
        }
    }
    for &w in &queried {
        for i in 0..=k {
            edges[query(w, i)] = (0..=i).map(|j| (budget(w, j), enter(w, j))).collect();
        }
    }
    for v in g.vertices_of(Owner::Nature) {
        for (d, values) in &dist_of[v] {
            edges[*d] = g
                .successors(v)
                .iter()
                .zip(values)
                .map(|(&w, &x)| (budget(w, x), enter(w, x)))
                .collect();
        }
    }
    Ok(ReducedGame {
        condition: Condition::Check,
        events: EventGame {
            ids,
            owners,
            edges,
            initial: 0,
            initial_priority: None,
        },
        roles,
        max_priority: g.max_priority(),
    })
}

fn pull_back_hat(g: &NatureGame, p: &ProductGame, moves: &[Option<usize>]) -> Result<PulledBack> {
    // Source vertices keep their indices in the avoid game.
    let vertex = |pv: usize| p.vertex_of(pv).expect("main state");
    fold_into_moore(
        g,
        0,
        |pv, _| Ok(vertex(p.step(pv, moves)?)),
        |pv, v, w| match g.owner(v) {
            Owner::Eloise => p.step(pv, moves),
            Owner::Abelard => p.follow(pv, |x| x == w),
            Owner::Nature => {
                let announced = p.step(pv, moves)?;
                p.follow(announced, |x| x == w)
            }
        },
        |pv| crate::game::Arena::id(&p.game, pv).to_string(),
    )
}

fn pull_back_check(g: &NatureGame, r: &ReducedGame, p: &ProductGame, moves: &[Option<usize>]) -> Result<PulledBack> {
    let budget_vertex = |pv: usize| match r.roles[p.vertex_of(pv).expect("main state")] {
        Role::Budget { vertex, .. } => Some(vertex),
        _ => None,
    };
    let start = p.step(0, moves)?;
    fold_into_moore(
        g,
        start,
        |pv, _| budget_vertex(p.step(pv, moves)?).ok_or_else(|| crate::Error::InvalidStrategy("unexpected gadget".into())),
        |pv, v, w| match g.owner(v) {
            Owner::Eloise => p.step(pv, moves),
            Owner::Abelard => {
                let q = p.follow(pv, |x| matches!(r.roles[x], Role::Query { vertex, .. } if vertex == w))?;
                p.step(q, moves)
            }
            Owner::Nature => {
                let mu = p.step(pv, moves)?;
                p.follow(mu, |x| matches!(r.roles[x], Role::Budget { vertex, .. } if vertex == w))
            }
        },
        |pv| crate::game::Arena::id(&p.game, pv).to_string(),
    )
}

/// Pulls a positional product strategy of Eloise back to the source game of
/// an avoid or budget game.
pub fn pull_back(g: &NatureGame, r: &ReducedGame, p: &ProductGame, moves: &[Option<usize>]) -> Result<PulledBack> {
    match r.condition {
        Condition::Hat => pull_back_hat(g, p, moves),
        Condition::Check => pull_back_check(g, r, p, moves),
        Condition::Tilde => Err(crate::Error::Precondition(
            "simulation games pull back through the topology module".into(),
        )),
    }
}

/// Whether Eloise has a strategy losing at most countably many plays against
/// every Abelard strategy.
pub fn decide_countable(g: &NatureGame, guards: &Guards) -> Result<Decision> {
    let r = build_hat(g);
    let t = compile_hat(g.max_priority());
    decide_with(r, &t, guards, |r, p, m| pull_back(g, r, p, m))
}

/// Whether Eloise has a strategy losing at most `k` plays against every
/// Abelard strategy.
pub fn decide_bounded(g: &NatureGame, k: u32, guards: &Guards) -> Result<Decision> {
    let r = build_check(g, k, guards)?;
    let t = compile_check(g.max_priority());
    decide_with(r, &t, guards, |r, p, m| pull_back(g, r, p, m))
}

/// Least `k ≤ max_k` for which [`decide_bounded`] holds.
pub fn least_bound(g: &NatureGame, max_k: u32, guards: &Guards) -> Result<Option<(u32, Decision)>> {
    for k in 0..=max_k {
        let d = decide_bounded(g, k, guards)?;
        if d.holds {
            return Ok(Some((k, d)));
        }
    }
    Ok(None)
}
