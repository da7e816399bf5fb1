//! Exact girth (length of a shortest cycle) and a shortest-cycle witness.
//!
//! One BFS per root: every non-tree edge {u, w} in the root's component gives
//! a closed walk of length dist(u) + dist(w) + 1 through that edge, which
//! contains a cycle no longer than the walk; rooting at a vertex of a shortest
//! cycle produces that cycle's length as a candidate, so the minimum over all
//! roots is exact. The witness is rebuilt from the two BFS parent paths,
//! stripped at their lowest common vertex so the cycle is simple.

use crate::graph::{Graph, Vertex};

/// Girth of a graph; `Infinite` means acyclic. Derived ordering puts
/// `Finite(a) < Finite(b)` for a < b and every `Finite` below `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl std::fmt::Display for Girth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Girth::Finite(l) => write!(f, "{l}"),
            Girth::Infinite => write!(f, "inf"),
        }
    }
}

/// Girth of `g`.
pub fn girth(g: &Graph) -> Girth {
    match shortest_cycle(g) {
        Some(cycle) => Girth::Finite(cycle.len()),
        None => Girth::Infinite,
    }
}

/// A shortest cycle of `g` as a vertex sequence (consecutive vertices and the
/// wrap-around pair are edges), or None if `g` is acyclic.
pub fn shortest_cycle(g: &Graph) -> Option<Vec<Vertex>> {
    let n = g.n();
    let mut best_len = usize::MAX;
    let mut best: Option<Vec<Vertex>> = None;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![u32::MAX; n];
    for root in 0..n as Vertex {
        for d in dist.iter_mut() {
            *d = usize::MAX;
        }
        dist[root as usize] = 0;
        parent[root as usize] = u32::MAX;
        let mut queue = std::collections::VecDeque::from([root]);
        let mut order = vec![root];
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if dist[w as usize] == usize::MAX {
                    dist[w as usize] = dist[v as usize] + 1;
                    parent[w as usize] = v;
                    queue.push_back(w);
                    order.push(w);
                }
            }
        }
        for &u in &order {
            for &w in g.neighbors(u) {
                if u < w
                    && dist[w as usize] != usize::MAX
                    && parent[u as usize] != w
                    && parent[w as usize] != u
                {
                    let cand = dist[u as usize] + dist[w as usize] + 1;
                    if cand < best_len {
                        best_len = cand;
                        best = Some(extract_cycle(u, w, &parent));
                    }
                }
            }
        }
    }
    best
}

/// Simple cycle through the non-tree edge {u, w}: ancestors of u up to the
/// lowest vertex shared with w's ancestor chain, then back down to w.
fn extract_cycle(u: Vertex, w: Vertex, parent: &[u32]) -> Vec<Vertex> {
    let chain = |mut v: Vertex| {
        let mut path = vec![v];
        while parent[v as usize] != u32::MAX {
            v = parent[v as usize];
            path.push(v);
        }
        path
    };
    let up = chain(u);
    let pos: std::collections::HashMap<Vertex, usize> =
        up.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut down = Vec::new();
    let mut v = w;
    let meet = loop {
        if let Some(&i) = pos.get(&v) {
            break i;
        }
        down.push(v);
        v = parent[v as usize];
    };
    let mut cycle: Vec<Vertex> = up[..=meet].to_vec();
    down.reverse();
    cycle.extend(down);
    cycle
}

/// Reference implementation: for every edge, the shortest cycle through it is
/// one plus the endpoint distance with the edge removed. O(m·(n+m)).
pub fn girth_by_edge_removal(g: &Graph) -> Girth {
    let mut best = usize::MAX;
    for (u, v) in g.edges() {
        if let Some(d) = bfs_avoiding_edge(g, u, v) {
            best = best.min(d + 1);
        }
    }
    if best == usize::MAX {
        Girth::Infinite
    } else {
        Girth::Finite(best)
    }
}

fn bfs_avoiding_edge(g: &Graph, from: Vertex, to: Vertex) -> Option<usize> {
    let mut dist = vec![usize::MAX; g.n()];
    dist[from as usize] = 0;
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        for &y in g.neighbors(x) {
            if (x, y) == (from, to) || (y, x) == (from, to) {
                continue;
            }
            if dist[y as usize] == usize::MAX {
                dist[y as usize] = dist[x as usize] + 1;
                if y == to {
                    return Some(dist[y as usize]);
                }
                queue.push_back(y);
            }
        }
    }
    None
}
