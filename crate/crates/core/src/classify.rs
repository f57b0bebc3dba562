//! Exact cardinality of the set of losing branches (least recurring priority
//! odd) of a pointed priority graph: finite, countably infinite, or
//! continuum.
//!
//! For an odd `c`, a c-trap is a reachable SCC of the priority-≥c subgraph
//! that holds a priority-`c` vertex and a cycle. Every losing branch ends in
//! some trap. A trap vertex with two successors inside the trap yields two
//! distinct equal-length cycles, hence a continuum of losing branches. When
//! every trap is a simple cycle, each losing branch is a prefix followed by a
//! trap cycle forever, so there are countably many; infinitely many exactly
//! when a vertex outside a trap lies on a cycle and reaches the trap, which
//! lets the prefix be pumped. Otherwise prefixes are simple paths and the
//! branches are counted directly.

use std::collections::HashSet;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{coreachable, parity_traps, shortest_path, PointedGraph};
use crate::guard::{self, Guards};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cardinality {
    Finite(u64),
    CountablyInfinite,
    Uncountable,
}

impl Cardinality {
    pub fn kind(&self) -> &'static str {
        match self {
            Cardinality::Finite(_) => "finite",
            Cardinality::CountablyInfinite => "aleph0",
            Cardinality::Uncountable => "continuum",
        }
    }
}

impl std::fmt::Display for Cardinality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cardinality::Finite(n) => write!(f, "finite({n})"),
            other => f.write_str(other.kind()),
        }
    }
}

/// An eventually periodic branch `handle · cycle^ω` (vertex indices).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lasso {
    pub handle: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl Lasso {
    /// Normal form: primitive cycle and shortest handle. Two lassos denote
    /// the same branch iff their normal forms are equal.
    pub fn normalized(mut self) -> Lasso {
        let l = self.cycle.len();
        if let Some(p) = (1..=l).find(|&p| l % p == 0 && (p..l).all(|i| self.cycle[i] == self.cycle[i - p])) {
            self.cycle.truncate(p);
        }
        while let (Some(&h), Some(&c)) = (self.handle.last(), self.cycle.last()) {
            if h != c {
                break;
            }
            self.handle.pop();
            self.cycle.rotate_right(1);
        }
        self
    }

    /// The first `len` vertices of the branch.
    pub fn prefix(&self, len: usize) -> Vec<usize> {
        self.handle
            .iter()
            .chain(self.cycle.iter().cycle())
            .take(len)
            .copied()
            .collect()
    }

    pub fn is_branch_of(&self, g: &PointedGraph) -> bool {
        if self.cycle.is_empty() {
            return false;
        }
        let walk = self.prefix(self.handle.len() + self.cycle.len() + 1);
        walk[0] == g.point() && walk.windows(2).all(|w| g.successors(w[0]).contains(&w[1]))
    }

    pub fn min_recurring(&self, g: &PointedGraph) -> u32 {
        self.cycle.iter().map(|&v| g.priority(v)).min().expect("nonempty cycle")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// All losing branches.
    Lassos { lassos: Vec<Lasso> },
    /// `vertex` lies on `cycle` outside the trap and `path` leads from it into
    /// the trap cycle `trap`.
    Pump {
        vertex: usize,
        cycle: Vec<usize>,
        path: Vec<usize>,
        trap: Vec<usize>,
    },
    /// Two distinct cycles of equal length through `vertex`, each with odd
    /// least priority `priority`; words over them give a continuum of branches.
    TwoCycles {
        vertex: usize,
        priority: u32,
        cycles: [Vec<usize>; 2],
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchCardinality {
    pub verdict: Cardinality,
    pub witness: Witness,
}

impl BranchCardinality {
    /// `{"kind":"finite|aleph0|continuum","count":n?,"witness":…}` with
    /// vertices written by label.
    pub fn to_json(&self, g: &PointedGraph) -> Value {
        let names = |vs: &[usize]| -> Value { vs.iter().map(|&v| Value::from(g.label(v))).collect() };
        let witness = match &self.witness {
            Witness::Lassos { lassos } => json!({
                "lassos": lassos
                    .iter()
                    .map(|l| json!({"handle": names(&l.handle), "cycle": names(&l.cycle)}))
                    .collect::<Vec<_>>()
            }),
            Witness::Pump { vertex, cycle, path, trap } => json!({
                "vertex": g.label(*vertex),
                "cycle": names(cycle),
                "path": names(path),
                "trap": names(trap),
            }),
            Witness::TwoCycles { vertex, priority, cycles } => json!({
                "vertex": g.label(*vertex),
                "priority": priority,
                "cycles": [names(&cycles[0]), names(&cycles[1])],
            }),
        };
        let mut out = json!({"kind": self.verdict.kind(), "witness": witness});
        if let Cardinality::Finite(n) = self.verdict {
            out["count"] = Value::from(n);
        }
        out
    }
}

/// Ordering of verdicts: Finite(0) < Finite(1) < … < ℵ0 < continuum.
pub fn rank(c: Cardinality) -> (u8, u64) {
    match c {
        Cardinality::Finite(n) => (0, n),
        Cardinality::CountablyInfinite => (1, 0),
        Cardinality::Uncountable => (2, 0),
    }
}

fn is_cycle(g: &PointedGraph, cycle: &[usize]) -> bool {
    !cycle.is_empty()
        && cycle
            .iter()
            .zip(cycle.iter().cycle().skip(1))
            .all(|(&a, &b)| g.successors(a).contains(&b))
}

fn is_path(g: &PointedGraph, path: &[usize]) -> bool {
    !path.is_empty() && path.windows(2).all(|w| g.successors(w[0]).contains(&w[1]))
}

/// Independent re-check of a witness against the graph and verdict.
pub fn verify_witness(g: &PointedGraph, bc: &BranchCardinality) -> bool {
    let reach = g.reachable();
    match (&bc.verdict, &bc.witness) {
        (Cardinality::Finite(n), Witness::Lassos { lassos }) => {
            let set: HashSet<Lasso> = lassos.iter().cloned().map(Lasso::normalized).collect();
            set.len() == lassos.len()
                && lassos.len() as u64 == *n
                && lassos.iter().all(|l| l.is_branch_of(g) && l.min_recurring(g) % 2 == 1)
        }
        (Cardinality::CountablyInfinite, Witness::Pump { vertex, cycle, path, trap }) => {
            reach[*vertex]
                && is_cycle(g, cycle)
                && cycle[0] == *vertex
                && is_path(g, path)
                && path[0] == *vertex
                && is_cycle(g, trap)
                && trap.contains(path.last().expect("nonempty"))
                && !trap.contains(vertex)
                && trap.iter().map(|&v| g.priority(v)).min().expect("nonempty") % 2 == 1
        }
        (Cardinality::Uncountable, Witness::TwoCycles { vertex, priority, cycles }) => {
            let [a, b] = cycles;
            let combined = a.iter().chain(b).map(|&v| g.priority(v)).min();
            reach[*vertex]
                && is_cycle(g, a)
                && is_cycle(g, b)
                && a[0] == *vertex
                && b[0] == *vertex
                && a.len() == b.len()
                && a != b
                && !commute(a, b)
                && combined == Some(*priority)
                && priority % 2 == 1
        }
        _ => false,
    }
}

/// Whether `ab == ba`, i.e. both words are powers of a common word.
pub fn commute(a: &[usize], b: &[usize]) -> bool {
    a.iter().chain(b).eq(b.iter().chain(a))
}

/// Cardinality of the losing branches of `g`.
pub fn classify_losing(g: &PointedGraph) -> BranchCardinality {
    classify_losing_with(g, &Guards::default()).expect("default path guard")
}

/// Cardinality of the winning branches (shift every priority by one).
pub fn classify_winning(g: &PointedGraph) -> BranchCardinality {
    classify_losing(&g.shifted())
}

pub fn classify_losing_with(g: &PointedGraph, guards: &Guards) -> Result<BranchCardinality> {
    let succ = g.adjacency();
    let n = g.len();
    let reach = g.reachable();
    let traps = parity_traps(succ, g.priorities(), &reach, 1);

    for (c, trap) in &traps {
        let inside: Vec<bool> = (0..n).map(|v| trap.binary_search(&v).is_ok()).collect();
        for &x in trap {
            let outs: Vec<usize> = succ[x].iter().copied().filter(|&w| inside[w]).collect();
            if outs.len() < 2 {
                continue;
            }
            let z = *trap.iter().find(|&&v| g.priority(v) == *c).expect("trap holds its priority");
            // x -> y ~> z ~> x inside the trap, as a cycle starting at x.
            let through = |y: usize| -> Vec<usize> {
                let mut w = vec![x];
                if y == z {
                    w.push(z);
                } else {
                    w.extend(shortest_path(succ, &inside, y, z).expect("strongly connected"));
                }
                if z == x {
                    w.pop();
                } else {
                    let back = shortest_path(succ, &inside, z, x).expect("strongly connected");
                    w.extend(&back[1..back.len() - 1]);
                }
                w
            };
            let a = through(outs[0]);
            let b = through(outs[1]);
            let ab: Vec<usize> = a.iter().chain(&b).copied().collect();
            let ba: Vec<usize> = b.iter().chain(&a).copied().collect();
            return Ok(BranchCardinality {
                verdict: Cardinality::Uncountable,
                witness: Witness::TwoCycles {
                    vertex: x,
                    priority: *c,
                    cycles: [ab, ba],
                },
            });
        }
    }

    // Every trap is now a simple cycle.
    let all_reach_cyclic: Vec<bool> = {
        let mut on_cycle = vec![false; n];
        for comp in crate::graph::sccs(succ, &reach) {
            if crate::graph::is_cyclic(succ, &comp) {
                for v in comp {
                    on_cycle[v] = true;
                }
            }
        }
        on_cycle
    };
    for (_, trap) in &traps {
        let inside: Vec<bool> = (0..n).map(|v| trap.binary_search(&v).is_ok()).collect();
        let co = coreachable(succ, &inside);
        if let Some(x) = (0..n).find(|&x| reach[x] && !inside[x] && all_reach_cyclic[x] && co[x]) {
            let cycle = shortest_path(succ, &reach, x, x).expect("x lies on a cycle");
            let path = (0..n)
                .filter(|&t| inside[t])
                .filter_map(|t| shortest_path(succ, &reach, x, t))
                .min_by_key(Vec::len)
                .expect("x reaches the trap");
            let entry = *path.last().expect("nonempty");
            let ring = shortest_path(succ, &inside, entry, entry).expect("trap is a cycle");
            return Ok(BranchCardinality {
                verdict: Cardinality::CountablyInfinite,
                witness: Witness::Pump {
                    vertex: x,
                    cycle,
                    path,
                    trap: ring,
                },
            });
        }
    }

    let lassos = count_finite(g, &traps, guards)?;
    Ok(BranchCardinality {
        verdict: Cardinality::Finite(lassos.len() as u64),
        witness: Witness::Lassos { lassos },
    })
}

/// Simple paths from the point; every time a path sits on a trap vertex, the
/// branch that stays on the trap cycle from there on is recorded.
fn count_finite(g: &PointedGraph, traps: &[(u32, Vec<usize>)], guards: &Guards) -> Result<Vec<Lasso>> {
    let succ = g.adjacency();
    let n = g.len();
    let mut trap_of = vec![None; n];
    for (i, (_, t)) in traps.iter().enumerate() {
        for &v in t {
            trap_of[v] = Some(i);
        }
    }
    let is_trap: Vec<bool> = trap_of.iter().map(Option::is_some).collect();
    let useful = coreachable(succ, &is_trap);
    // Cycle of each trap starting at a given member.
    let ring_from = |v: usize| -> Vec<usize> {
        let (_, t) = &traps[trap_of[v].expect("trap vertex")];
        let inside: Vec<bool> = (0..n).map(|u| t.binary_search(&u).is_ok()).collect();
        shortest_path(succ, &inside, v, v).expect("trap is a cycle")
    };
    let mut found: Vec<Lasso> = Vec::new();
    let mut seen: HashSet<Lasso> = HashSet::new();
    if !useful[g.point()] {
        return Ok(found);
    }
    let mut path = vec![g.point()];
    let mut on_path = vec![false; n];
    on_path[g.point()] = true;
    let mut stack: Vec<usize> = vec![0];
    let mut explored: u128 = 0;
    loop {
        let v = *path.last().expect("nonempty");
        let i = *stack.last().expect("nonempty");
        if i == 0 && trap_of[v].is_some() {
            let mut handle = path.clone();
            handle.pop();
            let l = Lasso {
                handle,
                cycle: ring_from(v),
            }
            .normalized();
            if seen.insert(l.clone()) {
                found.push(l);
            }
        }
        if let Some(&w) = succ[v].get(i) {
            *stack.last_mut().expect("nonempty") += 1;
            if !on_path[w] && useful[w] {
                explored += 1;
                guard::check("finite branch counting", explored, guards.paths)?;
                on_path[w] = true;
                path.push(w);
                stack.push(0);
            }
        } else {
            on_path[v] = false;
            path.pop();
            stack.pop();
            if path.is_empty() {
                break;
            }
        }
    }
    found.sort();
    Ok(found)
}

/// All distinct losing branches `u · w^ω` with `|u| ≤ handle_bound` and
/// `|w| ≤ loop_bound` (the point belongs to the handle unless it is empty),
/// as normal forms in sorted order.
pub fn enumerate_losing_lassos(
    g: &PointedGraph,
    handle_bound: usize,
    loop_bound: usize,
    guards: &Guards,
) -> Result<Vec<Lasso>> {
    if loop_bound == 0 {
        return Err(Error::Precondition("loop bound must be at least 1".into()));
    }
    let succ = g.adjacency();
    let mut out: HashSet<Lasso> = HashSet::new();
    let max_len = handle_bound + loop_bound;
    let mut explored: u128 = 0;
    // DFS over all walks from the point of length ≤ max_len.
    let mut walk = vec![g.point()];
    let mut stack = vec![0usize];
    loop {
        let len = walk.len();
        if stack.last() == Some(&0) {
            // Every split of the walk into handle and loop.
            for h in len.saturating_sub(loop_bound)..len.min(handle_bound + 1) {
                let cycle = &walk[h..];
                if succ[*cycle.last().expect("nonempty")].contains(&cycle[0])
                    && cycle.iter().map(|&v| g.priority(v)).min().expect("nonempty") % 2 == 1
                {
                    out.insert(
                        Lasso {
                            handle: walk[..h].to_vec(),
                            cycle: cycle.to_vec(),
                        }
                        .normalized(),
                    );
                }
            }
        }
        let v = *walk.last().expect("nonempty");
        let i = *stack.last().expect("nonempty");
        if len < max_len && i < succ[v].len() {
            *stack.last_mut().expect("nonempty") += 1;
            explored += 1;
            guard::check("lasso enumeration", explored, guards.paths)?;
            walk.push(succ[v][i]);
            stack.push(0);
        } else {
            walk.pop();
            stack.pop();
            if walk.is_empty() {
                break;
            }
        }
    }
    let mut v: Vec<Lasso> = out.into_iter().collect();
    v.sort();
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn loop1(p: u32) -> PointedGraph {
        PointedGraph::new(vec![vec![0]], vec![p], 0).unwrap()
    }

    #[test]
    fn single_odd_loop_is_one_branch() {
        let r = classify_losing(&loop1(1));
        assert_eq!(r.verdict, Cardinality::Finite(1));
        assert!(verify_witness(&loop1(1), &r));
        assert_eq!(enumerate_losing_lassos(&loop1(1), 3, 3, &Guards::default()).unwrap().len(), 1);
    }

    #[test]
    fn fig3_losing_is_countable() {
        let g = fixtures::fig3().graph();
        let r = classify_losing(&g);
        assert_eq!(r.verdict, Cardinality::CountablyInfinite);
        assert!(verify_witness(&g, &r));
        assert_eq!(enumerate_losing_lassos(&g, 3, 2, &Guards::default()).unwrap().len(), 4);
        assert_eq!(classify_winning(&g).verdict, Cardinality::Uncountable);
    }

    #[test]
    fn odd_clique_is_continuum() {
        let g = fixtures::all_odd_clique().graph();
        let r = classify_losing(&g);
        assert_eq!(r.verdict, Cardinality::Uncountable);
        assert!(verify_witness(&g, &r));
        assert_eq!(classify_winning(&g).verdict, Cardinality::Finite(0));
    }

    #[test]
    fn even_loop_has_one_winning_branch() {
        assert_eq!(classify_winning(&loop1(0)).verdict, Cardinality::Finite(1));
        assert_eq!(classify_losing(&loop1(0)).verdict, Cardinality::Finite(0));
    }

    #[test]
    fn normal_form_collapses_rotations() {
        let a = Lasso {
            handle: vec![0, 1, 2],
            cycle: vec![1, 2, 1, 2],
        }
        .normalized();
        assert_eq!(
            a,
            Lasso {
                handle: vec![0],
                cycle: vec![1, 2]
            }
        );
    }

    #[test]
    fn finite_counts_distinct_exits() {
        // 0 -> {1, 2}; 1 -> 1 (prio 1); 2 -> 2 (prio 3); 0 prio 0
        let g = PointedGraph::new(vec![vec![1, 2], vec![1], vec![2]], vec![0, 1, 3], 0).unwrap();
        let r = classify_losing(&g);
        assert_eq!(r.verdict, Cardinality::Finite(2));
        assert!(verify_witness(&g, &r));
    }

    #[test]
    fn commuting_words() {
        assert!(commute(&[1, 2, 1, 2], &[1, 2]));
        assert!(!commute(&[1, 2], &[2, 1]));
    }
}
