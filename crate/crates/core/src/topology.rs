//! Topological goodness in Eloise–Nature games: does Eloise have a strategy
//! whose losing plays form a meager set of branches?
//!
//! The question is decided on a simulation game where Eloise, on each move to
//! a Nature vertex, also points at a preferred successor and may mark the
//! position. Abelard resolves Nature and either follows or deviates from the
//! pointer. Eloise wins if she marks infinitely often and the play satisfies
//! parity, or marks finitely often and Abelard deviates infinitely often.
//! The simulation needs strict Eloise/Nature alternation, established first
//! by inserting single-successor dummy vertices.

use std::collections::HashMap;

use crate::condition::{compile_tilde, Condition, EventGame, Flag, ProductGame, StepEvent};
use crate::error::{Error, Result};
use crate::game::{Arena, NatureGame, Owner, Player};
use crate::guard::Guards;
use crate::reduced::{decide_with, fold_into_moore, Decision, PulledBack, ReducedGame, Role};

/// Where an inserted vertex comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DummyOrigin {
    /// Subdivides the source edge.
    Edge(usize, usize),
    /// Eloise start vertex in front of a Nature initial vertex.
    Start(usize),
}

/// A strictly alternating Eloise/Nature game; source vertices keep their
/// indices and dummies follow them.
#[derive(Clone, Debug)]
pub struct AlternatingGame {
    pub game: NatureGame,
    pub source_len: usize,
    pub dummies: Vec<DummyOrigin>,
    edge_dummy: HashMap<(usize, usize), usize>,
}

impl AlternatingGame {
    pub fn dummy_on(&self, u: usize, v: usize) -> Option<usize> {
        self.edge_dummy.get(&(u, v)).copied()
    }

    pub fn origin(&self, v: usize) -> Option<DummyOrigin> {
        v.checked_sub(self.source_len).map(|i| self.dummies[i])
    }
}

fn check_abelard_free(g: &NatureGame) -> Result<()> {
    match g.vertices_of(Owner::Abelard).next() {
        Some(v) => Err(Error::Precondition(format!(
            "topological goodness is only decided without Abelard (found {})",
            g.id(v)
        ))),
        None => Ok(()),
    }
}

/// Inserts a Nature vertex on every Eloise→Eloise edge, an Eloise vertex on
/// every Nature→Nature edge, and an Eloise start vertex if the initial vertex
/// belongs to Nature. Inserted vertices have priority `d + 1`.
pub fn alternate_normalize(g: &NatureGame) -> Result<AlternatingGame> {
    check_abelard_free(g)?;
    let n = g.len();
    let dummy_priority = g.max_priority() + 1;
    let mut ids = g.ids().to_vec();
    let mut taken: std::collections::HashSet<String> = ids.iter().cloned().collect();
    let mut fresh = |base: String, ids: &mut Vec<String>| {
        let mut id = base;
        while !taken.insert(id.clone()) {
            id.push('\'');
        }
        ids.push(id);
    };
    let mut owners = g.owners().to_vec();
    let mut priorities = g.priorities().to_vec();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut dummies = Vec::new();
    let mut edge_dummy = HashMap::new();
    for (u, v) in g.edges() {
        if g.owner(u) != g.owner(v) {
            succ[u].push(v);
            continue;
        }
        let x = ids.len();
        fresh(format!("{}~{}", g.id(u), g.id(v)), &mut ids);
        owners.push(if g.owner(u) == Owner::Eloise { Owner::Nature } else { Owner::Eloise });
        priorities.push(dummy_priority);
        succ.push(vec![v]);
        succ[u].push(x);
        dummies.push(DummyOrigin::Edge(u, v));
        edge_dummy.insert((u, v), x);
    }
    let mut initial = g.initial();
    if g.owner(initial) == Owner::Nature {
        let s = ids.len();
        fresh(format!("start~{}", g.id(initial)), &mut ids);
        owners.push(Owner::Eloise);
        priorities.push(dummy_priority);
        succ.push(vec![initial]);
        dummies.push(DummyOrigin::Start(initial));
        initial = s;
    }
    let game = if dummies.is_empty() {
        g.clone()
    } else {
        NatureGame::from_parts(ids, owners, succ, priorities, initial)?
    };
    Ok(AlternatingGame {
        game,
        source_len: n,
        dummies,
        edge_dummy,
    })
}

fn check_alternating(g: &NatureGame) -> Result<()> {
    check_abelard_free(g)?;
    if g.owner(g.initial()) != Owner::Eloise {
        return Err(Error::Precondition("the initial vertex must belong to Eloise".into()));
    }
    if let Some((u, v)) = g.edges().find(|&(u, v)| g.owner(u) == g.owner(v)) {
        return Err(Error::Precondition(format!(
            "edge {} -> {} does not alternate between Eloise and Nature",
            g.id(u),
            g.id(v)
        )));
    }
    Ok(())
}

/// The simulation game of an alternating game: Eloise keeps her vertices;
/// Abelard owns one vertex per (Nature vertex, pointed Eloise vertex, mark).
pub fn build_tilde(a: &AlternatingGame) -> Result<ReducedGame> {
    let g = &a.game;
    check_alternating(g)?;
    let eloise: Vec<usize> = g.vertices_of(Owner::Eloise).collect();
    let nature: Vec<usize> = g.vertices_of(Owner::Nature).collect();
    let mut reduced_of = vec![usize::MAX; g.len()];
    for (i, &v) in eloise.iter().enumerate() {
        reduced_of[v] = i;
    }
    let mut ids: Vec<String> = eloise.iter().map(|&v| g.id(v).to_string()).collect();
    let mut roles: Vec<Role> = eloise.iter().map(|&v| Role::Original(v)).collect();
    let mut taken: std::collections::HashSet<String> = ids.iter().cloned().collect();
    let base = ids.len();
    let direction = |ni: usize, wi: usize, top: bool| base + (ni * eloise.len() + wi) * 2 + usize::from(!top);
    for &nv in &nature {
        for &w in &eloise {
            for top in [true, false] {
                let mut id = format!("({},{},{})", g.id(nv), g.id(w), if top { "top" } else { "bot" });
                while !taken.insert(id.clone()) {
                    id.push('\'');
                }
                ids.push(id);
                roles.push(Role::Direction {
                    nature: nv,
                    toward: w,
                    top,
                });
            }
        }
    }
    let nature_pos: HashMap<usize, usize> = nature.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut edges: Vec<Vec<(usize, StepEvent)>> = vec![Vec::new(); ids.len()];
    for (i, &v) in eloise.iter().enumerate() {
        for &nv in g.successors(v) {
            for &w in g.successors(nv) {
                for top in [true, false] {
                    let flag = if top { Flag::Top } else { Flag::Bot };
                    edges[i].push((
                        direction(nature_pos[&nv], reduced_of[w], top),
                        StepEvent::flagged(g.priority(nv), flag),
                    ));
                }
            }
        }
    }
    for (ni, &nv) in nature.iter().enumerate() {
        for (wi, &w) in eloise.iter().enumerate() {
            for top in [true, false] {
                edges[direction(ni, wi, top)] = g
                    .successors(nv)
                    .iter()
                    .map(|&x| {
                        let flag = if x != w { Flag::Deviate } else { Flag::Follow };
                        (reduced_of[x], StepEvent::flagged(g.priority(x), flag))
                    })
                    .collect();
            }
        }
    }
    let owners = (0..ids.len())
        .map(|i| if i < base { Player::Eloise } else { Player::Abelard })
        .collect();
    Ok(ReducedGame {
        condition: Condition::Tilde,
        events: EventGame {
            ids,
            owners,
            edges,
            initial: reduced_of[g.initial()],
            initial_priority: Some(g.priority(g.initial())),
        },
        roles,
        max_priority: g.max_priority(),
    })
}

/// Folds a positional simulation-game strategy into a Moore strategy on the
/// source game (before normalization).
pub fn pull_back_tilde(
    source: &NatureGame,
    a: &AlternatingGame,
    r: &ReducedGame,
    p: &ProductGame,
    moves: &[Option<usize>],
) -> Result<PulledBack> {
    let role = |pv: usize| &r.roles[p.vertex_of(pv).expect("main state")];
    let pointed_nature = |pv: usize| match role(pv) {
        Role::Direction { nature, .. } => Ok(*nature),
        _ => Err(Error::InvalidStrategy("expected a direction vertex".into())),
    };
    let at = |x: usize| move |i: usize| r.roles[i] == Role::Original(x);
    let initial_key = if a.game.initial() == source.initial() { 0 } else { p.step(0, moves)? };
    fold_into_moore(
        source,
        initial_key,
        |pv, _| {
            let x = pointed_nature(p.step(pv, moves)?)?;
            Ok(match a.origin(x) {
                Some(DummyOrigin::Edge(_, u)) => u,
                _ => x,
            })
        },
        |pv, v, w| {
            if source.owner(v) == Owner::Eloise {
                let next = p.step(pv, moves)?;
                match a.origin(pointed_nature(next)?) {
                    Some(DummyOrigin::Edge(..)) => p.follow(next, at(w)),
                    _ => Ok(next),
                }
            } else if source.owner(w) == Owner::Eloise {
                p.follow(pv, at(w))
            } else {
                let y = a
                    .dummy_on(v, w)
                    .ok_or_else(|| Error::InvalidStrategy("missing dummy vertex".into()))?;
                let py = p.follow(pv, at(y))?;
                p.step(py, moves)
            }
        },
        |pv| crate::game::Arena::id(&p.game, pv).to_string(),
    )
}

/// Whether Eloise has a topologically good strategy in an Abelard-free game.
pub fn decide_topo_good(g: &NatureGame, guards: &Guards) -> Result<Decision> {
    let a = alternate_normalize(g)?;
    let r = build_tilde(&a)?;
    let t = compile_tilde(a.game.max_priority());
    decide_with(r, &t, guards, |r, p, m| pull_back_tilde(g, &a, r, p, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::game::GameBuilder;
    use crate::reduced::EdgeOrigin;

    #[test]
    fn t1_is_already_alternating() {
        let a = alternate_normalize(&fixtures::t1()).unwrap();
        assert!(a.dummies.is_empty());
        assert_eq!(a.game, fixtures::t1());
        assert_eq!(build_tilde(&a).unwrap().len(), 10);
    }

    #[test]
    fn dummies_on_same_owner_edges() {
        let g = GameBuilder::new()
            .vertex("e", Owner::Eloise, 0)
            .vertex("f", Owner::Eloise, 1)
            .vertex("n", Owner::Nature, 0)
            .edge("e", "f")
            .edge("f", "n")
            .edge("n", "e")
            .build()
            .unwrap();
        let a = alternate_normalize(&g).unwrap();
        assert_eq!(a.game.len(), 4);
        assert_eq!(a.game.priority(3), 2);
        assert_eq!(a.game.owner(3), Owner::Nature);

        let g = GameBuilder::new().vertex("n", Owner::Nature, 1).edge("n", "n").build().unwrap();
        let a = alternate_normalize(&g).unwrap();
        // loop dummy plus start vertex
        assert_eq!(a.dummies, vec![DummyOrigin::Edge(0, 0), DummyOrigin::Start(0)]);
        assert_eq!(a.game.owner(1), Owner::Eloise);
    }

    #[test]
    fn abelard_rejected() {
        assert!(alternate_normalize(&fixtures::fig5()).is_err());
        assert!(decide_topo_good(&fixtures::fig5(), &Guards::default()).is_err());
    }

    #[test]
    fn nature_free_alternating_rejected() {
        let g = GameBuilder::new().vertex("e", Owner::Eloise, 0).edge("e", "e").build().unwrap();
        let a = AlternatingGame {
            game: g,
            source_len: 1,
            dummies: vec![],
            edge_dummy: HashMap::new(),
        };
        assert!(build_tilde(&a).is_err());
    }

    #[test]
    fn single_resolution_is_always_follow() {
        let g = GameBuilder::new()
            .vertex("e", Owner::Eloise, 0)
            .vertex("n", Owner::Nature, 0)
            .edge("e", "n")
            .edge("n", "e")
            .build()
            .unwrap();
        let r = build_tilde(&alternate_normalize(&g).unwrap()).unwrap();
        for (i, role) in r.roles.iter().enumerate() {
            if matches!(role, Role::Direction { .. }) {
                for (_, ev) in &r.events.edges[i] {
                    assert!(ev.has(Flag::Follow) || ev.has(Flag::Deviate));
                    assert_eq!(r.events.edges[i].len(), 1);
                }
            }
        }
        assert!(decide_topo_good(&g, &Guards::default()).unwrap().holds);
    }

    #[test]
    fn tilde_edges_map_back() {
        let a = alternate_normalize(&fixtures::t2()).unwrap();
        let r = build_tilde(&a).unwrap();
        for (x, y) in r.edges() {
            match r.edge_origin(x, y) {
                Some(EdgeOrigin::Source(u, v)) => assert!(a.game.successors(u).contains(&v)),
                other => panic!("unexpected origin {other:?}"),
            }
        }
    }

    #[test]
    fn contrast_pair() {
        let gd = Guards::default();
        let d = decide_topo_good(&fixtures::t1(), &gd).unwrap();
        assert!(d.holds);
        d.strategy.unwrap().strategy.validate_for(&fixtures::t1()).unwrap();
        assert!(!decide_topo_good(&fixtures::t2(), &gd).unwrap().holds);
    }
}
