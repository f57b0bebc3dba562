//! Two-player parity games (min-parity: the least priority seen infinitely
//! often decides, even for Eloise), Zielonka's recursive algorithm with
//! positional strategy extraction, and a brute-force positional solver.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::game::{advance, Arena, MooreStrategy, NatureGame, Owner, Player};
use crate::graph::{coreachable, parity_traps, reachable};
use crate::guard::{self, Guards};
use crate::io::{GameDoc, VertexDoc};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityGame {
    ids: Vec<String>,
    owners: Vec<Player>,
    succ: Vec<Vec<usize>>,
    priorities: Vec<u32>,
    initial: usize,
}

impl ParityGame {
    pub fn new(
        ids: Vec<String>,
        owners: Vec<Player>,
        succ: Vec<Vec<usize>>,
        priorities: Vec<u32>,
        initial: usize,
    ) -> Result<Self> {
        // Reuse the arena checks (ids, dead-ends, ranges).
        let g = NatureGame::from_parts(
            ids,
            owners.iter().map(|p| p.owner()).collect(),
            succ,
            priorities,
            initial,
        )?;
        Ok(ParityGame::from_valid(&g, owners))
    }

    fn from_valid(g: &NatureGame, owners: Vec<Player>) -> Self {
        ParityGame {
            ids: g.ids().to_vec(),
            owners,
            succ: g.adjacency().to_vec(),
            priorities: g.priorities().to_vec(),
            initial: g.initial(),
        }
    }

    /// A Nature-free game as a parity game.
    pub fn from_nature_game(g: &NatureGame) -> Result<Self> {
        if let Some(v) = g.vertices_of(Owner::Nature).next() {
            return Err(Error::InvalidGame(format!(
                "parity games have no Nature vertices (found {})",
                g.id(v)
            )));
        }
        Ok(Self::nature_as(g, Player::Abelard))
    }

    /// Hands Nature's vertices to `player` (Abelard gives the sure-winning
    /// semantics for Eloise).
    pub fn nature_as(g: &NatureGame, player: Player) -> Self {
        let owners = g
            .owners()
            .iter()
            .map(|o| match o {
                Owner::Eloise => Player::Eloise,
                Owner::Abelard => Player::Abelard,
                Owner::Nature => player,
            })
            .collect();
        ParityGame::from_valid(g, owners)
    }

    pub fn from_doc(doc: &GameDoc) -> Result<Self> {
        Self::from_nature_game(&NatureGame::from_doc(doc)?)
    }

    pub fn to_doc(&self) -> GameDoc {
        GameDoc {
            vertices: (0..self.len())
                .map(|v| VertexDoc {
                    id: self.ids[v].clone(),
                    owner: Some(self.owners[v].owner()),
                    priority: self.priorities[v],
                })
                .collect(),
            edges: (0..self.len())
                .flat_map(|v| self.succ[v].iter().map(move |&w| (v, w)))
                .map(|(a, b)| (self.ids[a].clone(), self.ids[b].clone()))
                .collect(),
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

    pub fn player(&self, v: usize) -> Player {
        self.owners[v]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.succ
    }

    pub fn priorities(&self) -> &[u32] {
        &self.priorities
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|i| i == id)
    }

    pub fn with_initial(&self, initial: usize) -> Self {
        ParityGame {
            initial,
            ..self.clone()
        }
    }
}

impl Arena for ParityGame {
    fn vertex_count(&self) -> usize {
        self.len()
    }
    fn owner(&self, v: usize) -> Owner {
        self.owners[v].owner()
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

/// Winner at the initial vertex, winning regions, and positional strategies
/// of both players on their own regions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub winner: Player,
    pub region: Vec<Player>,
    pub eloise: Vec<Option<usize>>,
    pub abelard: Vec<Option<usize>>,
}

impl SolveResult {
    pub fn winner_at(&self, v: usize) -> Player {
        self.region[v]
    }

    pub fn moves(&self, player: Player) -> &[Option<usize>] {
        match player {
            Player::Eloise => &self.eloise,
            Player::Abelard => &self.abelard,
        }
    }

    /// The positional strategy of `player`, completed outside its region by
    /// the lowest-index successor.
    pub fn strategy(&self, player: Player, game: &ParityGame) -> MooreStrategy {
        let moves = (0..game.len())
            .map(|v| {
                (game.player(v) == player).then(|| self.moves(player)[v].unwrap_or(game.succ[v][0]))
            })
            .collect();
        MooreStrategy::positional(player, moves)
    }

    pub fn region_of(&self, player: Player) -> Vec<bool> {
        self.region.iter().map(|&p| p == player).collect()
    }
}

struct Zielonka<'a> {
    g: &'a ParityGame,
    pred: Vec<Vec<usize>>,
}

struct Partial {
    winner: Vec<Option<Player>>,
    strategy: Vec<Option<usize>>,
}

impl<'a> Zielonka<'a> {
    fn new(g: &'a ParityGame) -> Self {
        let mut pred = vec![Vec::new(); g.len()];
        for (v, s) in g.succ.iter().enumerate() {
            for &w in s {
                pred[w].push(v);
            }
        }
        Zielonka { g, pred }
    }

    /// Attractor of `player` to `target` inside `sub`, with the attracting
    /// move (lowest-index successor already attracted) for the player's
    /// vertices outside `target`.
    fn attractor(&self, player: Player, target: &[bool], sub: &[bool], strategy: &mut [Option<usize>]) -> Vec<bool> {
        let n = self.g.len();
        let mut attr: Vec<bool> = (0..n).map(|v| sub[v] && target[v]).collect();
        let mut count: Vec<usize> = (0..n)
            .map(|v| if sub[v] { self.g.succ[v].iter().filter(|&&w| sub[w]).count() } else { 0 })
            .collect();
        let mut queue: Vec<usize> = (0..n).filter(|&v| attr[v]).collect();
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            for &v in &self.pred[u] {
                if !sub[v] || attr[v] {
                    continue;
                }
                if self.g.owners[v] == player {
                    strategy[v] = self.g.succ[v].iter().copied().find(|&w| sub[w] && attr[w]);
                    attr[v] = true;
                    queue.push(v);
                } else {
                    count[v] -= 1;
                    if count[v] == 0 {
                        attr[v] = true;
                        queue.push(v);
                    }
                }
            }
        }
        attr
    }

    fn solve(&self, sub: &[bool]) -> Partial {
        let n = self.g.len();
        let mut out = Partial {
            winner: vec![None; n],
            strategy: vec![None; n],
        };
        let Some(p) = (0..n).filter(|&v| sub[v]).map(|v| self.g.priorities[v]).min() else {
            return out;
        };
        let alpha = Player::of_priority(p);
        let opp = alpha.opponent();
        let target: Vec<bool> = (0..n).map(|v| sub[v] && self.g.priorities[v] == p).collect();
        let mut attr_strategy = vec![None; n];
        let a = self.attractor(alpha, &target, sub, &mut attr_strategy);
        let sub1: Vec<bool> = (0..n).map(|v| sub[v] && !a[v]).collect();
        let first = self.solve(&sub1);
        let opp_wins: Vec<bool> = (0..n).map(|v| first.winner[v] == Some(opp)).collect();
        if !opp_wins.iter().any(|&b| b) {
            for v in (0..n).filter(|&v| sub[v]) {
                out.winner[v] = Some(alpha);
                if self.g.owners[v] != alpha {
                    continue;
                }
                out.strategy[v] = if sub1[v] {
                    first.strategy[v]
                } else if target[v] {
                    self.g.succ[v].iter().copied().find(|&w| sub[w])
                } else {
                    attr_strategy[v]
                };
            }
            return out;
        }
        let mut opp_strategy = vec![None; n];
        let b = self.attractor(opp, &opp_wins, sub, &mut opp_strategy);
        let sub2: Vec<bool> = (0..n).map(|v| sub[v] && !b[v]).collect();
        let second = self.solve(&sub2);
        for v in (0..n).filter(|&v| sub[v]) {
            if b[v] {
                out.winner[v] = Some(opp);
                if self.g.owners[v] == opp {
                    out.strategy[v] = if opp_wins[v] { first.strategy[v] } else { opp_strategy[v] };
                }
            } else {
                out.winner[v] = second.winner[v];
                out.strategy[v] = second.strategy[v];
            }
        }
        out
    }
}

/// Solves `game` with Zielonka's algorithm.
pub fn solve_parity(game: &ParityGame) -> SolveResult {
    let z = Zielonka::new(game);
    let all = vec![true; game.len()];
    let part = z.solve(&all);
    let region: Vec<Player> = part.winner.iter().map(|w| w.expect("every vertex is won")).collect();
    let mut eloise = vec![None; game.len()];
    let mut abelard = vec![None; game.len()];
    for v in 0..game.len() {
        if game.owners[v] == region[v] {
            match region[v] {
                Player::Eloise => eloise[v] = part.strategy[v],
                Player::Abelard => abelard[v] = part.strategy[v],
            }
        }
    }
    SolveResult {
        winner: region[game.initial],
        region,
        eloise,
        abelard,
    }
}

/// Start vertices from which every play consistent with the positional
/// `moves` of `player` (all other vertices, Nature included, adversarial) is
/// won by `player`.
pub fn sure_winning_set(arena: &impl Arena, player: Player, moves: &[Option<usize>]) -> Vec<bool> {
    let n = arena.vertex_count();
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|v| match (arena.owner(v) == player.owner(), moves[v]) {
            (true, Some(w)) => vec![w],
            _ => arena.successors(v).to_vec(),
        })
        .collect();
    let priority: Vec<u32> = (0..n).map(|v| arena.priority(v)).collect();
    let bad_parity = match player {
        Player::Eloise => 1,
        Player::Abelard => 0,
    };
    let mut bad = vec![false; n];
    for (_, comp) in parity_traps(&succ, &priority, &vec![true; n], bad_parity) {
        for v in comp {
            bad[v] = true;
        }
    }
    coreachable(&succ, &bad).iter().map(|b| !b).collect()
}

/// Whether every play from the initial vertex consistent with `sigma` is won
/// by its player; all other vertices (Nature included) are adversarial.
pub fn verify_sure(arena: &impl Arena, sigma: &MooreStrategy) -> bool {
    verify_sure_from(arena, sigma, arena.initial())
}

pub fn verify_sure_from(arena: &impl Arena, sigma: &MooreStrategy, start: usize) -> bool {
    if sigma.validate_for(arena).is_err() {
        return false;
    }
    let own = sigma.player().owner();
    let key0 = (start, sigma.initial_memory());
    let mut index: HashMap<(usize, usize), usize> = HashMap::from([(key0, 0)]);
    let mut states = vec![key0];
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let (v, m) = states[i];
        let targets: Vec<usize> = if arena.owner(v) == own {
            vec![sigma.next(m, v).expect("validated")]
        } else {
            arena.successors(v).to_vec()
        };
        let row = targets
            .into_iter()
            .map(|w| {
                let key = (w, sigma.up(m, w));
                *index.entry(key).or_insert_with(|| {
                    states.push(key);
                    states.len() - 1
                })
            })
            .collect();
        succ.push(row);
        i += 1;
    }
    let priority: Vec<u32> = states.iter().map(|&(v, _)| arena.priority(v)).collect();
    let bad_parity = match sigma.player() {
        Player::Eloise => 1,
        Player::Abelard => 0,
    };
    parity_traps(&succ, &priority, &vec![true; states.len()], bad_parity).is_empty()
}

/// All positional strategies of `player` (lexicographic in vertex order).
fn positional_strategies(game: &ParityGame, player: Player) -> Vec<Vec<Option<usize>>> {
    let owned: Vec<usize> = (0..game.len()).filter(|&v| game.owners[v] == player).collect();
    let radices: Vec<usize> = owned.iter().map(|&v| game.succ[v].len()).collect();
    let mut digits = vec![0; owned.len()];
    let mut out = Vec::new();
    loop {
        let mut moves = vec![None; game.len()];
        for (i, &v) in owned.iter().enumerate() {
            moves[v] = Some(game.succ[v][digits[i]]);
        }
        out.push(moves);
        if !advance(&mut digits, &radices) {
            return out;
        }
    }
}

/// Exhaustive positional search: the winning region of a player is the union
/// of the sets surely won by its positional strategies.
pub fn brute_solve(game: &ParityGame, guards: &Guards) -> Result<SolveResult> {
    let count = |p: Player| -> u128 {
        (0..game.len())
            .filter(|&v| game.owners[v] == p)
            .map(|v| game.succ[v].len() as u128)
            .product()
    };
    let total = count(Player::Eloise).saturating_add(count(Player::Abelard));
    guard::check("brute-force positional search", total, guards.brute_force)?;
    let mut result = SolveResult {
        winner: Player::Eloise,
        region: vec![Player::Eloise; game.len()],
        eloise: vec![None; game.len()],
        abelard: vec![None; game.len()],
    };
    let mut covered = vec![false; game.len()];
    for player in [Player::Eloise, Player::Abelard] {
        let candidates: Vec<(Vec<Option<usize>>, Vec<bool>)> = positional_strategies(game, player)
            .into_iter()
            .map(|m| {
                let w = sure_winning_set(game, player, &m);
                (m, w)
            })
            .collect();
        let region: Vec<bool> = (0..game.len()).map(|v| candidates.iter().any(|(_, w)| w[v])).collect();
        let (best, _) = candidates
            .iter()
            .find(|(_, w)| (0..game.len()).all(|v| !region[v] || w[v]))
            .ok_or_else(|| Error::Precondition("no uniform positional strategy found".into()))?;
        for v in 0..game.len() {
            if !region[v] {
                continue;
            }
            if covered[v] {
                return Err(Error::Precondition(format!("vertex {} won by both players", game.ids[v])));
            }
            covered[v] = true;
            result.region[v] = player;
            if game.owners[v] == player {
                match player {
                    Player::Eloise => result.eloise[v] = best[v],
                    Player::Abelard => result.abelard[v] = best[v],
                }
            }
        }
    }
    if let Some(v) = covered.iter().position(|c| !c) {
        return Err(Error::Precondition(format!("vertex {} won by neither player", game.ids[v])));
    }
    result.winner = result.region[game.initial];
    Ok(result)
}

/// Vertices reachable from the initial vertex.
pub fn reachable_part(game: &ParityGame) -> Vec<bool> {
    reachable(&game.succ, [game.initial])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn self_loop(priority: u32) -> ParityGame {
        ParityGame::new(vec!["x".into()], vec![Player::Eloise], vec![vec![0]], vec![priority], 0).unwrap()
    }

    #[test]
    fn trivial_loops() {
        for (p, w) in [(0, Player::Eloise), (1, Player::Abelard)] {
            let g = self_loop(p);
            let r = solve_parity(&g);
            assert_eq!(r.winner, w);
            assert_eq!(brute_solve(&g, &Guards::default()).unwrap(), r);
            let s = MooreStrategy::positional(Player::Eloise, vec![Some(0)]);
            assert_eq!(verify_sure(&g, &s), p == 0);
        }
    }

    #[test]
    fn nature_rejected() {
        assert!(ParityGame::from_nature_game(&crate::fixtures::fig3()).is_err());
    }

    #[test]
    fn strategies_win_their_regions() {
        // a (E,1) -> {a, b}; b (A,2) -> {a, c}; c (E,3) -> c
        let g = ParityGame::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![Player::Eloise, Player::Abelard, Player::Eloise],
            vec![vec![0, 1], vec![0, 2], vec![2]],
            vec![1, 2, 3],
            0,
        )
        .unwrap();
        let r = solve_parity(&g);
        assert_eq!(r.region, vec![Player::Abelard; 3]);
        assert!(sure_winning_set(&g, Player::Abelard, &r.abelard).iter().all(|&w| w));
        assert_eq!(brute_solve(&g, &Guards::default()).unwrap().region, r.region);
    }

    #[test]
    fn brute_guard() {
        let g = self_loop(0);
        let tiny = Guards {
            brute_force: 0,
            ..Guards::default()
        };
        assert!(brute_solve(&g, &tiny).unwrap_err().is_guard());
    }

    #[test]
    fn attracted_vertices_do_not_pick_their_own_loop() {
        // Fig. 5 with Nature handed to Abelard: at vA he must leave the
        // priority-0 loop.
        let g = ParityGame::nature_as(&crate::fixtures::fig5(), Player::Abelard);
        let r = solve_parity(&g);
        assert_eq!(r.winner, Player::Abelard);
        assert_eq!(r.abelard[0], Some(1));
        assert!(verify_sure(&g, &r.strategy(Player::Abelard, &g)));
    }
}
