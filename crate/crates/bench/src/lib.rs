//! Seeded benchmark inputs of exact size; see `benches/solvers.rs`.

use naturegames::{ParityGame, Player, PointedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn successors(rng: &mut ChaCha8Rng, n: usize, max_out: usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=max_out.min(n));
            let mut s: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect()
}

/// A parity game with `n` vertices, out-degree at most 3 and priorities
/// up to `d`.
pub fn parity_game(n: usize, d: u32, seed: u64) -> ParityGame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let owners = (0..n)
        .map(|_| if rng.gen_bool(0.5) { Player::Eloise } else { Player::Abelard })
        .collect();
    let succ = successors(&mut rng, n, 3);
    let priorities = (0..n).map(|_| rng.gen_range(0..=d)).collect();
    ParityGame::new((0..n).map(|v| format!("v{v}")).collect(), owners, succ, priorities, 0).expect("valid game")
}

/// A pointed graph with `n` vertices, out-degree at most 2 and priorities
/// up to `d`.
pub fn graph(n: usize, d: u32, seed: u64) -> PointedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let succ = successors(&mut rng, n, 2);
    let priorities = (0..n).map(|_| rng.gen_range(0..=d)).collect();
    PointedGraph::new(succ, priorities, 0).expect("valid graph")
}
