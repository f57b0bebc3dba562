//! Finite arenas with Nature, Moore strategies and strategy-restricted
//! outcome graphs.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{coreachable, reachable, PointedGraph};
use crate::guard::{self, Guards};
use crate::io::{GameDoc, VertexDoc};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Owner {
    Eloise,
    Abelard,
    Nature,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Eloise,
    Abelard,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Eloise => Player::Abelard,
            Player::Abelard => Player::Eloise,
        }
    }

    pub fn owner(self) -> Owner {
        match self {
            Player::Eloise => Owner::Eloise,
            Player::Abelard => Owner::Abelard,
        }
    }

    /// The player favoured by a minimal infinitely-recurring priority `p`.
    pub fn of_priority(p: u32) -> Player {
        if p % 2 == 0 {
            Player::Eloise
        } else {
            Player::Abelard
        }
    }
}

impl std::fmt::Display for Player {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Player::Eloise => "eloise",
            Player::Abelard => "abelard",
        })
    }
}

/// Read access shared by every finite arena in the crate.
pub trait Arena {
    fn vertex_count(&self) -> usize;
    fn owner(&self, v: usize) -> Owner;
    fn successors(&self, v: usize) -> &[usize];
    fn priority(&self, v: usize) -> u32;
    fn initial(&self) -> usize;
    fn id(&self, v: usize) -> &str;
}

/// A violated arena invariant, reported by the validators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub kind: &'static str,
    pub subject: String,
    pub message: String,
}

impl Diagnostic {
    pub(crate) fn new(kind: &'static str, subject: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            kind,
            subject: subject.into(),
            message: message.into(),
        }
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ({}): {}", self.kind, self.subject, self.message)
    }
}

pub(crate) fn diagnostics_error(diags: &[Diagnostic]) -> Error {
    let parts: Vec<String> = diags.iter().map(ToString::to_string).collect();
    Error::InvalidGame(parts.join("; "))
}

/// Checks a game document against the arena invariants. Diagnostics name the
/// invariant (`kind`) and the offending vertex or edge (`subject`).
pub fn validate_game(doc: &GameDoc) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if doc.vertices.is_empty() {
        out.push(Diagnostic::new("no-vertices", "", "the arena has no vertices"));
        return out;
    }
    let mut ids = HashSet::new();
    for v in &doc.vertices {
        if !ids.insert(v.id.as_str()) {
            out.push(Diagnostic::new("duplicate-vertex", &v.id, "vertex declared twice"));
        }
        if v.owner.is_none() {
            out.push(Diagnostic::new("partition", &v.id, "vertex has no owner"));
        }
    }
    let mut seen_edges = HashSet::new();
    let mut has_out: HashSet<&str> = HashSet::new();
    for (a, b) in &doc.edges {
        for end in [a, b] {
            if !ids.contains(end.as_str()) {
                out.push(Diagnostic::new(
                    "unknown-vertex",
                    format!("{a}->{b}"),
                    format!("edge endpoint `{end}` is not a vertex"),
                ));
            }
        }
        if !seen_edges.insert((a.as_str(), b.as_str())) {
            out.push(Diagnostic::new("duplicate-edge", format!("{a}->{b}"), "edge listed twice"));
        }
        has_out.insert(a.as_str());
    }
    let mut reported = HashSet::new();
    for v in &doc.vertices {
        if !has_out.contains(v.id.as_str()) && reported.insert(v.id.as_str()) {
            out.push(Diagnostic::new("dead-end", &v.id, "vertex has no outgoing edge"));
        }
    }
    if !ids.contains(doc.initial.as_str()) {
        out.push(Diagnostic::new("unknown-vertex", &doc.initial, "initial vertex is not a vertex"));
    }
    out
}

/// A finite arena partitioned between Eloise, Abelard and Nature, with a
/// priority per vertex and an initial vertex. Successor lists are sorted by
/// vertex index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatureGame {
    ids: Vec<String>,
    owners: Vec<Owner>,
    succ: Vec<Vec<usize>>,
    priorities: Vec<u32>,
    initial: usize,
    index: HashMap<String, usize>,
}

impl NatureGame {
    /// Builds a game from index-based tables, checking every invariant.
    pub fn from_parts(
        ids: Vec<String>,
        owners: Vec<Owner>,
        mut succ: Vec<Vec<usize>>,
        priorities: Vec<u32>,
        initial: usize,
    ) -> Result<Self> {
        let n = ids.len();
        if n == 0 {
            return Err(Error::InvalidGame("the arena has no vertices".into()));
        }
        if owners.len() != n || succ.len() != n || priorities.len() != n {
            return Err(Error::InvalidGame("table sizes differ from the vertex count".into()));
        }
        if initial >= n {
            return Err(Error::InvalidGame("initial vertex out of range".into()));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::InvalidGame(format!("duplicate-vertex ({id})")));
            }
        }
        for (v, s) in succ.iter_mut().enumerate() {
            if s.is_empty() {
                return Err(Error::InvalidGame(format!("dead-end ({})", ids[v])));
            }
            if s.iter().any(|&w| w >= n) {
                return Err(Error::InvalidGame(format!("edge target out of range at {}", ids[v])));
            }
            s.sort_unstable();
            s.dedup();
        }
        Ok(NatureGame {
            ids,
            owners,
            succ,
            priorities,
            initial,
            index,
        })
    }

    pub fn from_doc(doc: &GameDoc) -> Result<Self> {
        let diags = validate_game(doc);
        if !diags.is_empty() {
            return Err(diagnostics_error(&diags));
        }
        let index: HashMap<&str, usize> = doc.vertices.iter().enumerate().map(|(i, v)| (v.id.as_str(), i)).collect();
        let mut succ = vec![Vec::new(); doc.vertices.len()];
        for (a, b) in &doc.edges {
            succ[index[a.as_str()]].push(index[b.as_str()]);
        }
        NatureGame::from_parts(
            doc.vertices.iter().map(|v| v.id.clone()).collect(),
            doc.vertices.iter().map(|v| v.owner.expect("validated")).collect(),
            succ,
            doc.vertices.iter().map(|v| v.priority).collect(),
            index[doc.initial.as_str()],
        )
    }

    pub fn to_doc(&self) -> GameDoc {
        GameDoc {
            vertices: (0..self.len())
                .map(|v| VertexDoc {
                    id: self.ids[v].clone(),
                    owner: Some(self.owners[v]),
                    priority: self.priorities[v],
                })
                .collect(),
            edges: self.edges().map(|(a, b)| (self.ids[a].clone(), self.ids[b].clone())).collect(),
            initial: self.ids[self.initial].clone(),
            provenance: None,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn owners(&self) -> &[Owner] {
        &self.owners
    }

    pub fn priorities(&self) -> &[u32] {
        &self.priorities
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.succ
    }

    pub fn max_priority(&self) -> u32 {
        self.priorities.iter().copied().max().unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ.iter().enumerate().flat_map(|(v, s)| s.iter().map(move |&w| (v, w)))
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn vertices_of(&self, owner: Owner) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&v| self.owners[v] == owner)
    }

    pub fn has_owner(&self, owner: Owner) -> bool {
        self.owners.contains(&owner)
    }

    /// The underlying pointed priority graph (strategies ignored).
    pub fn graph(&self) -> PointedGraph {
        PointedGraph::with_labels(self.succ.clone(), self.priorities.clone(), self.initial, self.ids.clone())
            .expect("a valid game is a valid graph")
    }
}

impl Arena for NatureGame {
    fn vertex_count(&self) -> usize {
        self.len()
    }
    fn owner(&self, v: usize) -> Owner {
        self.owners[v]
    }
    fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }
    fn priority(&self, v: usize) -> u32 {
        self.priorities[v]
    }
    fn initial(&self) -> usize {
        self.initial
    }
    fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }
}

/// Incremental construction of a [`NatureGame`] by identifier.
#[derive(Clone, Debug, Default)]
pub struct GameBuilder {
    doc: GameDoc,
}

impl GameBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, id: &str, owner: Owner, priority: u32) -> Self {
        if self.doc.vertices.is_empty() && self.doc.initial.is_empty() {
            self.doc.initial = id.to_string();
        }
        self.doc.vertices.push(VertexDoc {
            id: id.to_string(),
            owner: Some(owner),
            priority,
        });
        self
    }

    pub fn edge(mut self, from: &str, to: &str) -> Self {
        self.doc.edges.push((from.to_string(), to.to_string()));
        self
    }

    pub fn edges(mut self, from: &str, to: &[&str]) -> Self {
        for t in to {
            self = self.edge(from, t);
        }
        self
    }

    pub fn initial(mut self, id: &str) -> Self {
        self.doc.initial = id.to_string();
        self
    }

    pub fn build(self) -> Result<NatureGame> {
        NatureGame::from_doc(&self.doc)
    }
}

/// A finite-memory (Moore) strategy. Memory `m0` is active at the initial
/// vertex; after moving to `v` the memory becomes `up(m, v)`; at a vertex `v`
/// owned by the player the strategy moves to `next(m, v)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MooreStrategy {
    player: Player,
    vertex_count: usize,
    memory_size: usize,
    initial_memory: usize,
    up: Vec<usize>,
    moves: Vec<Option<usize>>,
}

impl MooreStrategy {
    /// `up[m][v]` and `moves[m][v]`, with `moves` defined (at least) on the
    /// player's vertices.
    pub fn new(
        player: Player,
        initial_memory: usize,
        up: Vec<Vec<usize>>,
        moves: Vec<Vec<Option<usize>>>,
    ) -> Result<Self> {
        let memory_size = up.len();
        if memory_size == 0 || moves.len() != memory_size {
            return Err(Error::InvalidStrategy("memory tables have inconsistent sizes".into()));
        }
        let n = up[0].len();
        if up.iter().any(|r| r.len() != n) || moves.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidStrategy("table rows have inconsistent lengths".into()));
        }
        if initial_memory >= memory_size || up.iter().flatten().any(|&m| m >= memory_size) {
            return Err(Error::InvalidStrategy("memory index out of range".into()));
        }
        Ok(MooreStrategy {
            player,
            vertex_count: n,
            memory_size,
            initial_memory,
            up: up.into_iter().flatten().collect(),
            moves: moves.into_iter().flatten().collect(),
        })
    }

    /// A memoryless strategy.
    pub fn positional(player: Player, moves: Vec<Option<usize>>) -> Self {
        MooreStrategy {
            player,
            vertex_count: moves.len(),
            memory_size: 1,
            initial_memory: 0,
            up: vec![0; moves.len()],
            moves,
        }
    }

    /// The positional strategy choosing the lowest-index successor everywhere.
    pub fn lowest(player: Player, arena: &impl Arena) -> Self {
        let moves = (0..arena.vertex_count())
            .map(|v| (arena.owner(v) == player.owner()).then(|| arena.successors(v)[0]))
            .collect();
        MooreStrategy::positional(player, moves)
    }

    pub fn player(&self) -> Player {
        self.player
    }

    pub fn memory_size(&self) -> usize {
        self.memory_size
    }

    pub fn initial_memory(&self) -> usize {
        self.initial_memory
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn up(&self, m: usize, v: usize) -> usize {
        self.up[m * self.vertex_count + v]
    }

    pub fn next(&self, m: usize, v: usize) -> Option<usize> {
        self.moves[m * self.vertex_count + v]
    }

    /// Checks that the strategy fits `arena` and only makes legal moves.
    pub fn validate_for(&self, arena: &impl Arena) -> Result<()> {
        if self.vertex_count != arena.vertex_count() {
            return Err(Error::InvalidStrategy(format!(
                "strategy covers {} vertices, arena has {}",
                self.vertex_count,
                arena.vertex_count()
            )));
        }
        for m in 0..self.memory_size {
            for v in 0..self.vertex_count {
                if arena.owner(v) != self.player.owner() {
                    continue;
                }
                match self.next(m, v) {
                    Some(w) if arena.successors(v).contains(&w) => {}
                    Some(w) => {
                        return Err(Error::InvalidStrategy(format!(
                            "move {} -> {} is not an edge",
                            arena.id(v),
                            if w < arena.vertex_count() { arena.id(w) } else { "?" }
                        )))
                    }
                    None => {
                        return Err(Error::InvalidStrategy(format!(
                            "no move at {} for memory {m}",
                            arena.id(v)
                        )))
                    }
                }
            }
        }
        Ok(())
    }

    /// Memory states reachable from `m0` through `up`.
    pub fn reachable_memory(&self) -> Vec<bool> {
        let mut seen = vec![false; self.memory_size];
        seen[self.initial_memory] = true;
        let mut stack = vec![self.initial_memory];
        while let Some(m) = stack.pop() {
            for v in 0..self.vertex_count {
                let n = self.up(m, v);
                if !seen[n] {
                    seen[n] = true;
                    stack.push(n);
                }
            }
        }
        seen
    }

    /// Behaviour-preserving normal form on `arena`: update entries at vertices
    /// that cannot lead to a decision are dropped, memory is minimized
    /// (Moore partition refinement) and renamed in BFS order.
    pub fn canonical(&self, arena: &impl Arena) -> MooreStrategy {
        let scope = DecisionScope::new(arena, self.player);
        self.canonical_in(arena, &scope)
    }

    fn canonical_in(&self, arena: &impl Arena, scope: &DecisionScope) -> MooreStrategy {
        let mem = self.memory_size;
        // Partition refinement: start from the output (moves at decision vertices).
        let mut class: Vec<usize> = {
            let mut keys: HashMap<Vec<Option<usize>>, usize> = HashMap::new();
            (0..mem)
                .map(|m| {
                    let key: Vec<Option<usize>> = scope.decisions.iter().map(|&v| self.next(m, v)).collect();
                    let k = keys.len();
                    *keys.entry(key).or_insert(k)
                })
                .collect()
        };
        loop {
            let mut keys: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let next: Vec<usize> = (0..mem)
                .map(|m| {
                    let key = (class[m], scope.relevant.iter().map(|&v| class[self.up(m, v)]).collect());
                    let k = keys.len();
                    *keys.entry(key).or_insert(k)
                })
                .collect();
            let stable = keys.len() == class.iter().collect::<HashSet<_>>().len();
            class = next;
            if stable {
                break;
            }
        }
        // BFS renaming of the quotient from the initial class.
        let rep: HashMap<usize, usize> = (0..mem).rev().map(|m| (class[m], m)).collect();
        let mut order: Vec<usize> = vec![class[self.initial_memory]];
        let mut name: HashMap<usize, usize> = HashMap::from([(class[self.initial_memory], 0)]);
        let mut queue = VecDeque::from([class[self.initial_memory]]);
        while let Some(c) = queue.pop_front() {
            let m = rep[&c];
            for &v in &scope.relevant {
                let t = class[self.up(m, v)];
                if let std::collections::hash_map::Entry::Vacant(e) = name.entry(t) {
                    e.insert(order.len());
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
        let n = self.vertex_count;
        let size = order.len();
        let mut up = vec![vec![0; n]; size];
        let mut moves = vec![vec![None; n]; size];
        for (i, &c) in order.iter().enumerate() {
            let m = rep[&c];
            for v in 0..n {
                up[i][v] = i;
                if arena.owner(v) == self.player.owner() {
                    moves[i][v] = Some(arena.successors(v)[0]);
                }
            }
            for &v in &scope.relevant {
                up[i][v] = name[&class[self.up(m, v)]];
            }
            for &v in &scope.decisions {
                moves[i][v] = self.next(m, v);
            }
        }
        MooreStrategy::new(self.player, 0, up, moves).expect("canonical tables are consistent")
    }
}

/// Vertices where a strategy's tables matter: `decisions` are the player's
/// reachable vertices with a real choice, `relevant` the reachable vertices
/// from which a decision vertex can still be reached.
struct DecisionScope {
    decisions: Vec<usize>,
    relevant: Vec<usize>,
}

impl DecisionScope {
    fn new(arena: &impl Arena, player: Player) -> Self {
        let n = arena.vertex_count();
        let succ: Vec<Vec<usize>> = (0..n).map(|v| arena.successors(v).to_vec()).collect();
        let reach = reachable(&succ, [arena.initial()]);
        let is_decision: Vec<bool> = (0..n)
            .map(|v| reach[v] && arena.owner(v) == player.owner() && succ[v].len() > 1)
            .collect();
        let co = coreachable(&succ, &is_decision);
        DecisionScope {
            decisions: (0..n).filter(|&v| is_decision[v]).collect(),
            relevant: (0..n).filter(|&v| reach[v] && co[v]).collect(),
        }
    }
}

/// Every Moore strategy of `player` with at most `memory_bound` memory states,
/// up to behaviour-preserving renaming, in a deterministic order (increasing
/// memory, then lexicographic tables).
pub fn enumerate_strategies(
    arena: &impl Arena,
    player: Player,
    memory_bound: usize,
    guards: &Guards,
) -> Result<Vec<MooreStrategy>> {
    if memory_bound == 0 {
        return Err(Error::Precondition("memory bound must be at least 1".into()));
    }
    let scope = DecisionScope::new(arena, player);
    let choices: Vec<usize> = scope.decisions.iter().map(|&v| arena.successors(v).len()).collect();
    let product: u128 = choices.iter().map(|&c| c as u128).product();
    let r = scope.relevant.len() as u32;
    let mut total: u128 = 0;
    for j in 1..=memory_bound as u128 {
        let ups = if scope.decisions.is_empty() {
            1
        } else {
            j.checked_pow((j as u32).saturating_mul(r)).unwrap_or(u128::MAX)
        };
        let moves = product.checked_pow(j as u32).unwrap_or(u128::MAX);
        total = total.saturating_add(ups.saturating_mul(moves));
    }
    guard::check("strategy enumeration", total, guards.strategies)?;

    let n = arena.vertex_count();
    let lowest = MooreStrategy::lowest(player, arena);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let max_mem = if scope.decisions.is_empty() { 1 } else { memory_bound };
    for j in 1..=max_mem {
        // Mixed-radix counter over move digits then update digits.
        let mut radices: Vec<usize> = Vec::new();
        for _ in 0..j {
            radices.extend(choices.iter().copied());
        }
        let move_digits = radices.len();
        if j > 1 {
            radices.extend(std::iter::repeat(j).take(j * scope.relevant.len()));
        }
        let mut digits = vec![0usize; radices.len()];
        loop {
            let mut up = vec![vec![0; n]; j];
            let mut moves = vec![vec![None; n]; j];
            for m in 0..j {
                for v in 0..n {
                    up[m][v] = m;
                    moves[m][v] = lowest.next(0, v);
                }
                for (i, &v) in scope.decisions.iter().enumerate() {
                    moves[m][v] = Some(arena.successors(v)[digits[m * choices.len() + i]]);
                }
                if j > 1 {
                    for (i, &v) in scope.relevant.iter().enumerate() {
                        up[m][v] = digits[move_digits + m * scope.relevant.len() + i];
                    }
                }
            }
            let raw = MooreStrategy::new(player, 0, up, moves).expect("well-formed tables");
            let canon = raw.canonical_in(arena, &scope);
            if seen.insert(canon.clone()) {
                out.push(canon);
            }
            if !advance(&mut digits, &radices) {
                break;
            }
        }
    }
    out.sort_by_key(|s| s.memory_size);
    Ok(out)
}

/// Lexicographic successor of a mixed-radix counter; false once it wraps.
pub(crate) fn advance(digits: &mut [usize], radices: &[usize]) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radices[i] {
            return true;
        }
        digits[i] = 0;
    }
    false
}

/// The finite graph of plays consistent with two strategies: states are
/// (vertex, Eloise memory, Abelard memory); only Nature states branch.
#[derive(Clone, Debug)]
pub struct OutcomeGraph {
    pub graph: PointedGraph,
    pub states: Vec<(usize, usize, usize)>,
}

/// Restricts `arena` to the plays consistent with `sigma` (Eloise) and `tau`
/// (Abelard).
pub fn restrict_by_strategies(arena: &impl Arena, sigma: &MooreStrategy, tau: &MooreStrategy) -> Result<OutcomeGraph> {
    if sigma.player() != Player::Eloise || tau.player() != Player::Abelard {
        return Err(Error::InvalidStrategy("expected an Eloise and an Abelard strategy".into()));
    }
    sigma.validate_for(arena)?;
    tau.validate_for(arena)?;
    let v0 = arena.initial();
    let start = (v0, sigma.initial_memory(), tau.initial_memory());
    let mut index: HashMap<(usize, usize, usize), usize> = HashMap::from([(start, 0)]);
    let mut states = vec![start];
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let (v, me, ma) = states[i];
        let targets: Vec<usize> = match arena.owner(v) {
            Owner::Eloise => vec![sigma.next(me, v).expect("validated")],
            Owner::Abelard => vec![tau.next(ma, v).expect("validated")],
            Owner::Nature => arena.successors(v).to_vec(),
        };
        let mut row = Vec::with_capacity(targets.len());
        for w in targets {
            let key = (w, sigma.up(me, w), tau.up(ma, w));
            let next = *index.entry(key).or_insert_with(|| {
                states.push(key);
                states.len() - 1
            });
            row.push(next);
        }
        succ.push(row);
        i += 1;
    }
    let priority = states.iter().map(|&(v, _, _)| arena.priority(v)).collect();
    let labels = states.iter().map(|&(v, a, b)| format!("{}|{a}|{b}", arena.id(v))).collect();
    Ok(OutcomeGraph {
        graph: PointedGraph::with_labels(succ, priority, 0, labels)?,
        states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fig3_is_valid() {
        assert!(validate_game(&fixtures::fig3().to_doc()).is_empty());
    }

    #[test]
    fn dead_end_and_partition_diagnostics() {
        let mut doc = GameBuilder::new()
            .vertex("a", Owner::Eloise, 0)
            .vertex("sink", Owner::Nature, 1)
            .edge("a", "sink")
            .doc;
        let d = validate_game(&doc);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].kind, "dead-end");
        assert_eq!(d[0].subject, "sink");
        doc.edges.push(("sink".into(), "a".into()));
        doc.vertices[0].owner = None;
        let d = validate_game(&doc);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].kind, "partition");
        assert_eq!(d[0].subject, "a");
    }

    #[test]
    fn fig3_restriction_is_the_graph() {
        let g = fixtures::fig3();
        let s = MooreStrategy::lowest(Player::Eloise, &g);
        let t = MooreStrategy::lowest(Player::Abelard, &g);
        let o = restrict_by_strategies(&g, &s, &t).unwrap();
        assert_eq!(o.graph.len(), 2);
        assert_eq!(o.graph.edge_count(), 4);
    }

    #[test]
    fn fig5_restriction_has_two_branches() {
        let g = fixtures::fig5();
        let v = |s: &str| g.index_of(s).unwrap();
        let mut m = vec![None; g.len()];
        m[v("vE")] = Some(v("vW"));
        m[v("vL")] = Some(v("vL"));
        m[v("vW")] = Some(v("vW"));
        let sigma = MooreStrategy::positional(Player::Eloise, m);
        let mut m = vec![None; g.len()];
        m[v("vA")] = Some(v("vN"));
        let tau = MooreStrategy::positional(Player::Abelard, m);
        let o = restrict_by_strategies(&g, &sigma, &tau).unwrap();
        // vA vN, then vL^w or vE vW^w
        assert_eq!(o.graph.len(), 5);
        let branching: Vec<usize> = (0..o.graph.len()).filter(|&s| o.graph.successors(s).len() > 1).collect();
        assert_eq!(branching.len(), 1);
        assert_eq!(o.states[branching[0]].0, v("vN"));
    }

    #[test]
    fn single_loop_restriction() {
        let g = GameBuilder::new().vertex("x", Owner::Eloise, 0).edge("x", "x").build().unwrap();
        let s = MooreStrategy::lowest(Player::Eloise, &g);
        let t = MooreStrategy::lowest(Player::Abelard, &g);
        let o = restrict_by_strategies(&g, &s, &t).unwrap();
        assert_eq!(o.graph.len(), 1);
        assert_eq!(o.graph.successors(0), &[0]);
    }

    #[test]
    fn player_mismatch_is_an_error() {
        let g = fixtures::fig3();
        let s = MooreStrategy::lowest(Player::Eloise, &g);
        assert!(restrict_by_strategies(&g, &s, &s).is_err());
    }

    #[test]
    fn enumeration_counts_on_figures() {
        let gd = Guards::default();
        assert_eq!(enumerate_strategies(&fixtures::fig3(), Player::Eloise, 1, &gd).unwrap().len(), 1);
        assert_eq!(enumerate_strategies(&fixtures::fig5(), Player::Eloise, 1, &gd).unwrap().len(), 2);
        assert_eq!(enumerate_strategies(&fixtures::fig5(), Player::Abelard, 1, &gd).unwrap().len(), 2);
    }

    #[test]
    fn memory_two_adds_distinct_behaviours() {
        let g = fixtures::fig5();
        let all = enumerate_strategies(&g, Player::Abelard, 2, &Guards::default()).unwrap();
        assert!(all.len() > 2);
        assert!(all.iter().all(|s| s.memory_size() <= 2));
        let set: HashSet<_> = all.iter().collect();
        assert_eq!(set.len(), all.len());
        for s in &all {
            assert_eq!(&s.canonical(&g), s);
        }
    }

    #[test]
    fn enumeration_guard_trips() {
        let g = fixtures::fig5();
        let tiny = Guards {
            strategies: 1,
            ..Guards::default()
        };
        assert!(enumerate_strategies(&g, Player::Abelard, 1, &tiny).unwrap_err().is_guard());
    }
}
