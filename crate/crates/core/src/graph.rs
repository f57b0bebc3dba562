//! Pointed priority graphs and the SCC machinery shared by the solvers and
//! the branch classifier.

use crate::error::{Error, Result};

/// A finite directed graph without dead-ends, with a priority per vertex and
/// a distinguished point. Its branches are the infinite paths from the point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedGraph {
    succ: Vec<Vec<usize>>,
    priority: Vec<u32>,
    point: usize,
    labels: Vec<String>,
}

impl PointedGraph {
    pub fn new(succ: Vec<Vec<usize>>, priority: Vec<u32>, point: usize) -> Result<Self> {
        let labels = (0..succ.len()).map(|i| i.to_string()).collect();
        Self::with_labels(succ, priority, point, labels)
    }

    pub fn with_labels(
        mut succ: Vec<Vec<usize>>,
        priority: Vec<u32>,
        point: usize,
        labels: Vec<String>,
    ) -> Result<Self> {
        let n = succ.len();
        if n == 0 {
            return Err(Error::InvalidGame("graph has no vertices".into()));
        }
        if priority.len() != n || labels.len() != n {
            return Err(Error::InvalidGame("priority/label table size mismatch".into()));
        }
        if point >= n {
            return Err(Error::InvalidGame(format!("point {point} out of range")));
        }
        for (v, s) in succ.iter_mut().enumerate() {
            if s.is_empty() {
                return Err(Error::InvalidGame(format!("dead-end at {}", labels[v])));
            }
            if let Some(&w) = s.iter().find(|&&w| w >= n) {
                return Err(Error::InvalidGame(format!("edge target {w} out of range")));
            }
            s.sort_unstable();
            s.dedup();
        }
        Ok(PointedGraph {
            succ,
            priority,
            point,
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.succ
    }

    pub fn priority(&self, v: usize) -> u32 {
        self.priority[v]
    }

    pub fn priorities(&self) -> &[u32] {
        &self.priority
    }

    pub fn point(&self) -> usize {
        self.point
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn reachable(&self) -> Vec<bool> {
        reachable(&self.succ, [self.point])
    }

    /// Same graph with every priority shifted by one, which swaps the parity
    /// of every liminf.
    pub fn shifted(&self) -> PointedGraph {
        PointedGraph {
            succ: self.succ.clone(),
            priority: self.priority.iter().map(|p| p + 1).collect(),
            point: self.point,
            labels: self.labels.clone(),
        }
    }
}

/// Vertices reachable from `starts`.
pub fn reachable(succ: &[Vec<usize>], starts: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut seen = vec![false; succ.len()];
    let mut stack: Vec<usize> = Vec::new();
    for s in starts {
        if !seen[s] {
            seen[s] = true;
            stack.push(s);
        }
    }
    while let Some(v) = stack.pop() {
        for &w in &succ[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// Vertices from which some vertex of `targets` is reachable.
pub fn coreachable(succ: &[Vec<usize>], targets: &[bool]) -> Vec<bool> {
    let n = succ.len();
    let mut pred = vec![Vec::new(); n];
    for (v, s) in succ.iter().enumerate() {
        for &w in s {
            pred[w].push(v);
        }
    }
    let starts = (0..n).filter(|&v| targets[v]);
    reachable(&pred, starts)
}

/// Strongly connected components of the subgraph induced by `mask`
/// (iterative Tarjan). Components come out in reverse topological order.
pub fn sccs(succ: &[Vec<usize>], mask: &[bool]) -> Vec<Vec<usize>> {
    let n = succ.len();
    const NONE: usize = usize::MAX;
    let mut index = vec![NONE; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0usize;
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if !mask[root] || index[root] != NONE {
            continue;
        }
        call.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i < succ[v].len() {
                let w = succ[v][*i];
                *i += 1;
                if !mask[w] {
                    continue;
                }
                if index[w] == NONE {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
    }
    out
}

/// Whether a component (as returned by [`sccs`]) contains a cycle, i.e. has
/// more than one vertex or a self-loop.
pub fn is_cyclic(succ: &[Vec<usize>], comp: &[usize]) -> bool {
    comp.len() > 1 || succ[comp[0]].contains(&comp[0])
}

/// Shortest path from `from` to `to` inside `mask` (both endpoints included).
/// With `from == to` the result is a shortest cycle through `from`, returned
/// without repeating the endpoint.
pub fn shortest_path(succ: &[Vec<usize>], mask: &[bool], from: usize, to: usize) -> Option<Vec<usize>> {
    let n = succ.len();
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    for &w in &succ[from] {
        if mask[w] && !seen[w] {
            seen[w] = true;
            parent[w] = from;
            queue.push_back(w);
        }
    }
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut path = vec![v];
            let mut cur = v;
            while parent[cur] != from {
                cur = parent[cur];
                path.push(cur);
            }
            path.push(from);
            path.reverse();
            if from == to {
                path.pop();
            }
            return Some(path);
        }
        for &w in &succ[v] {
            if mask[w] && !seen[w] {
                seen[w] = true;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    None
}

/// For every priority `c` with `c % 2 == parity`, the SCCs of the subgraph of
/// `mask` restricted to priorities ≥ c that contain a priority-`c` vertex and
/// a cycle. Any infinite path whose minimal recurring priority is `c` ends
/// inside one of them.
pub fn parity_traps(succ: &[Vec<usize>], priority: &[u32], mask: &[bool], parity: u32) -> Vec<(u32, Vec<usize>)> {
    let mut cs: Vec<u32> = (0..succ.len())
        .filter(|&v| mask[v] && priority[v] % 2 == parity)
        .map(|v| priority[v])
        .collect();
    cs.sort_unstable();
    cs.dedup();
    let mut out = Vec::new();
    for c in cs {
        let sub: Vec<bool> = (0..succ.len()).map(|v| mask[v] && priority[v] >= c).collect();
        for comp in sccs(succ, &sub) {
            if comp.iter().any(|&v| priority[v] == c) && is_cyclic(succ, &comp) {
                out.push((c, comp));
            }
        }
    }
    out
}
