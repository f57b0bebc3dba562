//! Knowledge-set construction: the perfect-information game over Eloise's
//! sets of possible current vertices.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::game::{GameAction, ImperfectGame, Objective};
use super::{check_len, precondition};
use crate::error::Result;
use crate::game::Player;
use crate::guard::Guards;
use crate::parity::ParityGame;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KnowledgeNode {
    Set(Vec<usize>),
    /// Eloise committed to an action at a knowledge set; the adversary picks
    /// the next observation.
    Choice { set: usize, action: usize },
    /// Reached when no action is legal at every vertex of a set.
    Lost,
}

#[derive(Clone, Debug)]
pub struct KnowledgeGame {
    pub game: ParityGame,
    pub nodes: Vec<KnowledgeNode>,
}

impl KnowledgeGame {
    pub fn set_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, KnowledgeNode::Set(_))).count()
    }

    pub fn sets_owned_by(&self, player: Player) -> usize {
        (0..self.nodes.len())
            .filter(|&i| matches!(self.nodes[i], KnowledgeNode::Set(_)) && self.game.player(i) == player)
            .count()
    }
}

/// Builds the knowledge game of a parity game with observation classes.
/// Eloise sure-wins the imperfect game iff she wins this game from its
/// initial vertex.
pub fn knowledge_construction(g: &ImperfectGame, guards: &Guards) -> Result<KnowledgeGame> {
    if g.objective != Objective::Parity {
        return Err(precondition(
            "the knowledge construction needs an observable parity objective; flagged transitions are hidden",
        ));
    }
    for v in 0..g.len() {
        for w in 0..g.len() {
            if g.class_of[v] == g.class_of[w] && (g.priorities[v] != g.priorities[w] || g.owners[v] != g.owners[w]) {
                return Err(precondition(format!(
                    "class {} mixes owners or priorities",
                    g.class_names[g.class_of[v]]
                )));
            }
        }
    }
    let label = |a: &GameAction| match a {
        GameAction::Plain(x) => g.source_actions[*x].clone(),
        other => other.to_json(&g.source_ids, &g.source_actions).to_string(),
    };
    let set_name = |s: &[usize]| {
        let names: Vec<&str> = s.iter().map(|&v| g.ids[v].as_str()).collect();
        format!("{{{}}}", names.join(","))
    };

    let mut nodes = vec![KnowledgeNode::Set(vec![g.initial])];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(vec![g.initial], 0)]);
    let mut succ: Vec<Vec<usize>> = vec![Vec::new()];
    let mut lost: Option<usize> = None;
    let mut queue = VecDeque::from([0usize]);

    // Successor knowledge sets of a set of outcomes, one per class.
    let split = |post: BTreeSet<usize>| {
        let mut by_class: Vec<(usize, Vec<usize>)> = Vec::new();
        for w in post {
            let c = g.class_of[w];
            match by_class.iter_mut().find(|(k, _)| *k == c) {
                Some((_, s)) => s.push(w),
                None => by_class.push((c, vec![w])),
            }
        }
        by_class.sort();
        by_class.into_iter().map(|(_, s)| s).collect::<Vec<_>>()
    };

    while let Some(i) = queue.pop_front() {
        check_len("knowledge states", nodes.len() as u128, guards.states)?;
        let KnowledgeNode::Set(set) = nodes[i].clone() else {
            continue;
        };
        let owner = g.owners[set[0]];
        let mut targets: Vec<(Option<usize>, Vec<Vec<usize>>)> = Vec::new();
        if owner == Player::Abelard {
            let post: BTreeSet<usize> = set.iter().flat_map(|&v| g.transitions[v][0].iter().map(|&(w, _)| w)).collect();
            targets.push((None, split(post)));
        } else {
            let c = g.class_of[set[0]];
            for a in 0..g.class_actions[c].len() {
                if set.iter().all(|&v| !g.transitions[v][a].is_empty()) {
                    let post = set.iter().flat_map(|&v| g.transitions[v][a].iter().map(|&(w, _)| w)).collect();
                    targets.push((Some(a), split(post)));
                }
            }
        }
        let mut intern = |s: Vec<usize>, nodes: &mut Vec<KnowledgeNode>, succ: &mut Vec<Vec<usize>>| {
            *index.entry(s.clone()).or_insert_with(|| {
                nodes.push(KnowledgeNode::Set(s));
                succ.push(Vec::new());
                queue.push_back(nodes.len() - 1);
                nodes.len() - 1
            })
        };
        if targets.is_empty() {
            let l = *lost.get_or_insert_with(|| {
                nodes.push(KnowledgeNode::Lost);
                succ.push(Vec::new());
                nodes.len() - 1
            });
            succ[l] = vec![l];
            succ[i].push(l);
            continue;
        }
        for (action, sets) in targets {
            let next: Vec<usize> = sets.into_iter().map(|s| intern(s, &mut nodes, &mut succ)).collect();
            match action {
                None => succ[i] = next,
                Some(a) => {
                    nodes.push(KnowledgeNode::Choice { set: i, action: a });
                    succ.push(next);
                    succ[i].push(nodes.len() - 1);
                }
            }
        }
    }

    let mut ids = Vec::with_capacity(nodes.len());
    let mut owners = Vec::with_capacity(nodes.len());
    let mut priorities = Vec::with_capacity(nodes.len());
    for node in &nodes {
        match node {
            KnowledgeNode::Set(s) => {
                ids.push(set_name(s));
                owners.push(g.owners[s[0]]);
                priorities.push(g.priorities[s[0]]);
            }
            KnowledgeNode::Choice { set, action } => {
                let KnowledgeNode::Set(s) = &nodes[*set] else { unreachable!() };
                ids.push(format!("{}/{}", set_name(s), label(&g.class_actions[g.class_of[s[0]]][*action])));
                owners.push(Player::Abelard);
                priorities.push(g.priorities[s[0]]);
            }
            KnowledgeNode::Lost => {
                ids.push("lost".into());
                owners.push(Player::Abelard);
                priorities.push(1);
            }
        }
    }
    let game = ParityGame::new(ids, owners, succ, priorities, 0)?;
    Ok(KnowledgeGame { game, nodes })
}
