//! Imperfect-information arenas: Eloise observes only the class of the
//! current vertex and picks actions; the outcome of an action is a set of
//! vertices resolved by Nature. Abelard is perfectly informed and moves
//! freely.

mod game;
mod knowledge;
mod reductions;

pub use game::{
    solve_imperfect_bounded, verify_obs_strategy, GameAction, ImperfectGame, LocalChoice, ObsStrategy, Objective,
};
pub use knowledge::{knowledge_construction, KnowledgeGame};
pub use reductions::{build_hat_imperfect, build_tilde_imperfect};

use std::collections::{HashMap, HashSet};

use crate::condition::StepEvent;
use crate::error::{Error, Result};
use crate::game::{diagnostics_error, Diagnostic, NatureGame, Owner, Player};
use crate::graph::reachable;
use crate::io::{DeltaADoc, DeltaEDoc, ImperfectDoc, VertexDoc};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImperfectArena {
    ids: Vec<String>,
    owners: Vec<Player>,
    actions: Vec<String>,
    /// `delta_e[v][a]`: outcomes of action `a` at Eloise vertex `v`, empty
    /// when disabled.
    delta_e: Vec<Vec<Vec<usize>>>,
    delta_a: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    priorities: Vec<u32>,
    initial: usize,
}

/// Checks an imperfect-arena document: ownership, transitions, and that
/// observation classes neither mix owners nor priorities.
pub fn validate_imperfect(doc: &ImperfectDoc) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if doc.vertices.is_empty() {
        out.push(Diagnostic::new("no-vertices", "", "the arena has no vertices"));
        return out;
    }
    let mut owner: HashMap<&str, Option<Owner>> = HashMap::new();
    let mut priority: HashMap<&str, u32> = HashMap::new();
    for v in &doc.vertices {
        if owner.insert(v.id.as_str(), v.owner).is_some() {
            out.push(Diagnostic::new("duplicate-vertex", &v.id, "vertex declared twice"));
        }
        priority.insert(v.id.as_str(), v.priority);
        match v.owner {
            None => out.push(Diagnostic::new("partition", &v.id, "vertex has no owner")),
            Some(Owner::Nature) => out.push(Diagnostic::new(
                "partition",
                &v.id,
                "imperfect arenas have Eloise and Abelard vertices only",
            )),
            _ => {}
        }
    }
    let actions: HashSet<&str> = doc.actions.iter().map(String::as_str).collect();
    if actions.len() != doc.actions.len() {
        out.push(Diagnostic::new("duplicate-action", "", "an action is declared twice"));
    }
    let known = |id: &str, ctx: &str, out: &mut Vec<Diagnostic>| -> bool {
        if owner.contains_key(id) {
            true
        } else {
            out.push(Diagnostic::new("unknown-vertex", ctx, format!("`{id}` is not a vertex")));
            false
        }
    };
    let mut enabled: HashSet<&str> = HashSet::new();
    let mut seen_e = HashSet::new();
    for t in &doc.delta_e {
        let ctx = format!("{}/{}", t.from, t.action);
        if !actions.contains(t.action.as_str()) {
            out.push(Diagnostic::new("unknown-action", &ctx, format!("`{}` is not an action", t.action)));
        }
        if known(&t.from, &ctx, &mut out) && owner[t.from.as_str()] != Some(Owner::Eloise) {
            out.push(Diagnostic::new("owner-mismatch", &ctx, "action transitions leave Eloise vertices only"));
        }
        for w in &t.to {
            known(w, &ctx, &mut out);
        }
        if !seen_e.insert((t.from.as_str(), t.action.as_str())) {
            out.push(Diagnostic::new("duplicate-transition", &ctx, "transition listed twice"));
        }
        if !t.to.is_empty() {
            enabled.insert(t.from.as_str());
        }
    }
    let mut seen_a = HashSet::new();
    for t in &doc.delta_a {
        if known(&t.from, &t.from, &mut out) && owner[t.from.as_str()] != Some(Owner::Abelard) {
            out.push(Diagnostic::new("owner-mismatch", &t.from, "free moves leave Abelard vertices only"));
        }
        for w in &t.to {
            known(w, &t.from, &mut out);
        }
        if !seen_a.insert(t.from.as_str()) {
            out.push(Diagnostic::new("duplicate-transition", &t.from, "transition listed twice"));
        }
        if !t.to.is_empty() {
            enabled.insert(t.from.as_str());
        }
    }
    for v in &doc.vertices {
        if !enabled.contains(v.id.as_str()) {
            out.push(Diagnostic::new("dead-end", &v.id, "no enabled action or move"));
        }
    }
    let mut in_class = HashSet::new();
    for class in &doc.observations {
        let name = format!("{{{}}}", class.join(","));
        let mut owners_here = HashSet::new();
        let mut prios = HashSet::new();
        for id in class {
            if !known(id, &name, &mut out) {
                continue;
            }
            if !in_class.insert(id.as_str()) {
                out.push(Diagnostic::new("overlapping-class", id, "vertex appears in two observation classes"));
            }
            owners_here.insert(owner[id.as_str()]);
            prios.insert(priority[id.as_str()]);
        }
        if owners_here.len() > 1 {
            out.push(Diagnostic::new("mixed-class", &name, "class mixes Eloise and Abelard vertices"));
        }
        if prios.len() > 1 {
            out.push(Diagnostic::new("class-priority", &name, "priority is not constant on the class"));
        }
    }
    if !owner.contains_key(doc.initial.as_str()) {
        out.push(Diagnostic::new("unknown-vertex", &doc.initial, "initial vertex is not a vertex"));
    }
    out
}

impl ImperfectArena {
    pub fn from_doc(doc: &ImperfectDoc) -> Result<Self> {
        let diags = validate_imperfect(doc);
        if !diags.is_empty() {
            return Err(diagnostics_error(&diags));
        }
        let index: HashMap<&str, usize> = doc.vertices.iter().enumerate().map(|(i, v)| (v.id.as_str(), i)).collect();
        let action_index: HashMap<&str, usize> =
            doc.actions.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
        let n = doc.vertices.len();
        let sorted = |ids: &[String]| {
            let mut v: Vec<usize> = ids.iter().map(|w| index[w.as_str()]).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let mut delta_e = vec![vec![Vec::new(); doc.actions.len()]; n];
        for t in &doc.delta_e {
            delta_e[index[t.from.as_str()]][action_index[t.action.as_str()]] = sorted(&t.to);
        }
        let mut delta_a = vec![Vec::new(); n];
        for t in &doc.delta_a {
            delta_a[index[t.from.as_str()]] = sorted(&t.to);
        }
        let mut class_lists: Vec<Vec<usize>> = doc.observations.iter().map(|c| sorted(c)).collect();
        let covered: HashSet<usize> = class_lists.iter().flatten().copied().collect();
        class_lists.extend((0..n).filter(|v| !covered.contains(v)).map(|v| vec![v]));
        Ok(Self::assemble(
            doc.vertices.iter().map(|v| v.id.clone()).collect(),
            doc.vertices
                .iter()
                .map(|v| {
                    if v.owner == Some(Owner::Abelard) {
                        Player::Abelard
                    } else {
                        Player::Eloise
                    }
                })
                .collect(),
            doc.actions.clone(),
            delta_e,
            delta_a,
            class_lists,
            doc.vertices.iter().map(|v| v.priority).collect(),
            index[doc.initial.as_str()],
        ))
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        ids: Vec<String>,
        owners: Vec<Player>,
        actions: Vec<String>,
        delta_e: Vec<Vec<Vec<usize>>>,
        delta_a: Vec<Vec<usize>>,
        mut classes: Vec<Vec<usize>>,
        priorities: Vec<u32>,
        initial: usize,
    ) -> Self {
        classes.retain(|c| !c.is_empty());
        classes.sort();
        let mut class_of = vec![0; ids.len()];
        for (i, c) in classes.iter().enumerate() {
            for &v in c {
                class_of[v] = i;
            }
        }
        ImperfectArena {
            ids,
            owners,
            actions,
            delta_e,
            delta_a,
            class_of,
            classes,
            priorities,
            initial,
        }
    }

    pub fn to_doc(&self) -> ImperfectDoc {
        let name = |v: usize| self.ids[v].clone();
        let names = |vs: &[usize]| vs.iter().map(|&v| name(v)).collect::<Vec<_>>();
        let mut delta_e = Vec::new();
        let mut delta_a = Vec::new();
        for v in 0..self.len() {
            match self.owners[v] {
                Player::Eloise => {
                    for (a, to) in self.delta_e[v].iter().enumerate() {
                        if !to.is_empty() {
                            delta_e.push(DeltaEDoc {
                                from: name(v),
                                action: self.actions[a].clone(),
                                to: names(to),
                            });
                        }
                    }
                }
                Player::Abelard => delta_a.push(DeltaADoc {
                    from: name(v),
                    to: names(&self.delta_a[v]),
                }),
            }
        }
        ImperfectDoc {
            vertices: (0..self.len())
                .map(|v| VertexDoc {
                    id: name(v),
                    owner: Some(self.owners[v].owner()),
                    priority: self.priorities[v],
                })
                .collect(),
            actions: self.actions.clone(),
            delta_e,
            delta_a,
            observations: self.classes.iter().filter(|c| c.len() > 1).map(|c| names(c)).collect(),
            initial: name(self.initial),
        }
    }

    /// Perfect-information view of a game with Nature: each Eloise edge
    /// becomes an action with a single outcome, each Nature vertex an Eloise
    /// vertex with one action whose outcomes are Nature's choices; every
    /// class is a singleton.
    pub fn from_perfect(g: &NatureGame) -> Self {
        use crate::game::Arena;
        let n = g.len();
        let mut actions: Vec<String> = vec!["nature".into()];
        actions.extend(g.ids().iter().map(|id| format!("to:{id}")));
        let mut delta_e = vec![vec![Vec::new(); actions.len()]; n];
        let mut delta_a = vec![Vec::new(); n];
        let mut owners = Vec::with_capacity(n);
        for v in 0..n {
            match g.owner(v) {
                Owner::Eloise => {
                    for &w in g.successors(v) {
                        delta_e[v][1 + w] = vec![w];
                    }
                    owners.push(Player::Eloise);
                }
                Owner::Nature => {
                    delta_e[v][0] = g.successors(v).to_vec();
                    owners.push(Player::Eloise);
                }
                Owner::Abelard => {
                    delta_a[v] = g.successors(v).to_vec();
                    owners.push(Player::Abelard);
                }
            }
        }
        Self::assemble(
            g.ids().to_vec(),
            owners,
            actions,
            delta_e,
            delta_a,
            (0..n).map(|v| vec![v]).collect(),
            g.priorities().to_vec(),
            g.initial(),
        )
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|i| i == id)
    }

    pub fn owner(&self, v: usize) -> Player {
        self.owners[v]
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn action_index(&self, name: &str) -> Option<usize> {
        self.actions.iter().position(|a| a == name)
    }

    pub fn priority(&self, v: usize) -> u32 {
        self.priorities[v]
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_name(&self, c: usize) -> String {
        let names: Vec<&str> = self.classes[c].iter().map(|&v| self.ids[v].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Outcomes of action `a` at Eloise vertex `v` (empty when disabled).
    pub fn outcomes(&self, v: usize, a: usize) -> &[usize] {
        &self.delta_e[v][a]
    }

    pub fn abelard_moves(&self, v: usize) -> &[usize] {
        &self.delta_a[v]
    }

    pub fn has_abelard(&self) -> bool {
        self.owners.contains(&Player::Abelard)
    }

    /// All successors of `v` under any action or move.
    pub fn successors(&self, v: usize) -> Vec<usize> {
        let mut s: Vec<usize> = match self.owners[v] {
            Player::Eloise => self.delta_e[v].iter().flatten().copied().collect(),
            Player::Abelard => self.delta_a[v].clone(),
        };
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Vertices reachable from the initial vertex under any actions.
    pub fn reachable(&self) -> Vec<bool> {
        let succ: Vec<Vec<usize>> = (0..self.len()).map(|v| self.successors(v)).collect();
        reachable(&succ, [self.initial])
    }

    /// The game in which Eloise sees everything: she picks an action at
    /// `v` (an Abelard-owned intermediate vertex `v/a`) and the adversary
    /// resolves it.
    pub fn expanded_game(&self) -> Result<crate::parity::ParityGame> {
        let n = self.len();
        let mut ids = self.ids.clone();
        let mut owners = self.owners.clone();
        let mut priorities = self.priorities.clone();
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        for v in 0..n {
            match self.owners[v] {
                Player::Abelard => succ[v] = self.delta_a[v].clone(),
                Player::Eloise => {
                    for (a, to) in self.delta_e[v].iter().enumerate() {
                        if to.is_empty() {
                            continue;
                        }
                        succ[v].push(ids.len());
                        ids.push(format!("{}/{}", self.ids[v], self.actions[a]));
                        owners.push(Player::Abelard);
                        priorities.push(self.priorities[v]);
                        succ.push(to.clone());
                    }
                }
            }
        }
        crate::parity::ParityGame::new(ids, owners, succ, priorities, self.initial)
    }
}

impl ImperfectArena {
    /// The arena as an imperfect game with its own parity condition; class
    /// actions are the source actions in order.
    pub fn as_parity_game(&self) -> ImperfectGame {
        let k = self.classes.len();
        ImperfectGame {
            ids: self.ids.clone(),
            owners: self.owners.clone(),
            priorities: self.priorities.clone(),
            class_of: self.class_of.clone(),
            class_names: (0..k).map(|c| self.class_name(c)).collect(),
            class_actions: vec![(0..self.actions.len()).map(GameAction::Plain).collect(); k],
            transitions: (0..self.len())
                .map(|v| {
                    let enter = |ws: &[usize]| -> Vec<(usize, StepEvent)> {
                        ws.iter().map(|&w| (w, StepEvent::enter(self.priorities[w]))).collect()
                    };
                    match self.owners[v] {
                        Player::Eloise => self.delta_e[v].iter().map(|ws| enter(ws)).collect(),
                        Player::Abelard => vec![enter(&self.delta_a[v])],
                    }
                })
                .collect(),
            initial: self.initial,
            objective: Objective::Parity,
            source_ids: self.ids.clone(),
            source_actions: self.actions.clone(),
        }
    }

    /// Fixes Eloise's observation strategy (moves are source actions) and
    /// leaves the rest of the play open: the result is a game with Nature
    /// over (vertex, memory) where Nature resolves Eloise's actions and
    /// Abelard keeps his vertices.
    pub fn unfold(&self, sigma: &ObsStrategy) -> Result<NatureGame> {
        let mem = sigma.memory_size;
        let start = self.initial * mem + sigma.initial_memory;
        let mut index = HashMap::from([(start, 0usize)]);
        let mut states = vec![start];
        let mut succ: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let (v, m) = (states[i] / mem, states[i] % mem);
            let outs = match self.owners[v] {
                Player::Abelard => &self.delta_a[v],
                Player::Eloise => {
                    let a = sigma.next(m, self.class_of[v]).ok_or_else(|| {
                        Error::InvalidStrategy(format!("no action at {} with memory {m}", self.ids[v]))
                    })?;
                    match self.delta_e[v].get(a) {
                        Some(ws) if !ws.is_empty() => ws,
                        _ => {
                            return Err(Error::InvalidStrategy(format!(
                                "action {a} is not enabled at {}",
                                self.ids[v]
                            )))
                        }
                    }
                }
            };
            let mut row = Vec::with_capacity(outs.len());
            for &w in outs {
                let s = w * mem + sigma.up(m, self.class_of[w]);
                let j = *index.entry(s).or_insert_with(|| {
                    states.push(s);
                    states.len() - 1
                });
                row.push(j);
            }
            succ.push(row);
            i += 1;
        }
        NatureGame::from_parts(
            states.iter().map(|s| format!("{}|{}", self.ids[s / mem], s % mem)).collect(),
            states
                .iter()
                .map(|s| match self.owners[s / mem] {
                    Player::Eloise => Owner::Nature,
                    Player::Abelard => Owner::Abelard,
                })
                .collect(),
            succ,
            states.iter().map(|s| self.priorities[s / mem]).collect(),
            0,
        )
    }
}

pub(crate) fn check_len(what: &'static str, size: u128, cap: u128) -> Result<()> {
    crate::guard::check(what, size, cap)
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

#[cfg(test)]
mod tests;
