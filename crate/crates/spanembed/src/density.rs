//! Exact maximum subgraph density.
//!
//! The density of a graph is max over non-empty vertex sets S of
//! 2·e(S)/|S|, where e(S) counts edges inside S. A set attaining the maximum
//! is found exactly (as a rational, no floating point) by binary search over
//! a rational grid combined with a min-cut probe: for a threshold a/b the
//! probe network has source→v arcs of capacity deg(v)·b, both directions of
//! each edge at capacity b, and v→sink arcs of capacity a. Its min cut drops
//! below 2mb exactly when some S has 2·e(S)/|S| > a/b, and the source side of
//! the cut is such an S. Candidate densities are spaced at least 2/n² apart,
//! so ~log(n³) probes on the grid u/(n(n−1)) isolate the exact value; the
//! result is certified by one final probe at the returned density itself.

use num_rational::Ratio;

use crate::graph::{Graph, Vertex};

// ==== Dinic max-flow ===========================================================

struct Arc {
    to: usize,
    rev: usize,
    cap: i64,
}

struct Dinic {
    adj: Vec<Vec<Arc>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(nodes: usize) -> Self {
        Dinic { adj: (0..nodes).map(|_| Vec::new()).collect(), level: Vec::new(), iter: Vec::new() }
    }

    /// Adds an arc `from → to` with capacity `cap` and a paired reverse arc
    /// with capacity `rcap` (0 for a plain directed arc).
    fn add_arc(&mut self, from: usize, to: usize, cap: i64, rcap: i64) {
        let fwd = self.adj[to].len();
        let bwd = self.adj[from].len();
        self.adj[from].push(Arc { to, rev: fwd, cap });
        self.adj[to].push(Arc { to: from, rev: bwd, cap: rcap });
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level = vec![-1; self.adj.len()];
        self.level[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for arc in &self.adj[v] {
                if arc.cap > 0 && self.level[arc.to] < 0 {
                    self.level[arc.to] = self.level[v] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, v: usize, t: usize, f: i64) -> i64 {
        if v == t {
            return f;
        }
        while self.iter[v] < self.adj[v].len() {
            let i = self.iter[v];
            let (to, cap, rev) = {
                let a = &self.adj[v][i];
                (a.to, a.cap, a.rev)
            };
            if cap > 0 && self.level[to] == self.level[v] + 1 {
                let d = self.dfs(to, t, f.min(cap));
                if d > 0 {
                    self.adj[v][i].cap -= d;
                    self.adj[to][rev].cap += d;
                    return d;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.iter = vec![0; self.adj.len()];
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
        flow
    }

    /// Nodes reachable from `s` in the residual network (the min-cut side).
    fn cut_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for arc in &self.adj[v] {
                if arc.cap > 0 && !seen[arc.to] {
                    seen[arc.to] = true;
                    stack.push(arc.to);
                }
            }
        }
        seen
    }
}

// ==== density probe and binary search ==========================================

/// Tests whether some non-empty S has 2·e(S)/|S| > a/b; on success returns
/// such a set (the source side of the min cut), sorted.
///
/// Pre: b ≥ 1, a ≥ 0, and deg(v)·b, a, 2mb all fit in i64 without overflow —
/// callers keep a ≤ 2m·b and b ≤ 2n(n−1).
fn probe(g: &Graph, a: i64, b: i64) -> Option<Vec<Vertex>> {
    let n = g.n();
    let (s, t) = (n, n + 1);
    let mut net = Dinic::new(n + 2);
    for v in 0..n {
        net.add_arc(s, v, g.degree(v as Vertex) as i64 * b, 0);
        net.add_arc(v, t, a, 0);
    }
    for (u, v) in g.edges() {
        net.add_arc(u as usize, v as usize, b, b);
    }
    let flow = net.max_flow(s, t);
    let bound = 2 * g.edge_count() as i64 * b;
    if flow >= bound {
        return None;
    }
    let side = net.cut_side(s);
    let set: Vec<Vertex> = (0..n).filter(|&v| side[v]).map(|v| v as Vertex).collect();
    assert!(!set.is_empty(), "cut below the empty-set bound must expose a witness");
    Some(set)
}

/// Maximum subgraph density 2·e(S)/|S| together with a set attaining it
/// (sorted; empty exactly when the graph has no edges, where the density is 0).
pub fn densest_subgraph(g: &Graph) -> (Ratio<i64>, Vec<Vertex>) {
    if g.edge_count() == 0 {
        return (Ratio::from_integer(0), Vec::new());
    }
    let n = g.n() as i64;
    let d = n * (n - 1);
    // Invariant: probe succeeds at lo/d, fails at hi/d.
    let mut lo = 0i64;
    let mut hi = (n - 1) * d;
    let mut witness = probe(g, 0, d).expect("a graph with an edge has positive density");
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match probe(g, mid, d) {
            Some(w) => {
                witness = w;
                lo = mid;
            }
            None => hi = mid,
        }
    }
    // Distinct candidate densities are ≥ 2/n² ≥ 1/d apart, so (lo/d, hi/d]
    // holds exactly one candidate: both the maximum and the witness's density.
    let e = g.induced_edge_count(&witness) as i64;
    let density = Ratio::new(2 * e, witness.len() as i64);
    assert!(
        probe(g, *density.numer(), *density.denom()).is_none(),
        "certification probe found a set denser than the witness"
    );
    (density, witness)
}

/// Maximum subgraph density of `g` as an exact rational.
pub fn max_density(g: &Graph) -> Ratio<i64> {
    densest_subgraph(g).0
}

/// Reference implementation by subset enumeration; exponential, for
/// cross-checking on graphs with at most ~20 vertices.
pub fn max_density_by_enumeration(g: &Graph) -> Ratio<i64> {
    let n = g.n();
    assert!(n <= 20, "enumeration oracle limited to small graphs");
    let mut best = Ratio::from_integer(0);
    for mask in 1u32..(1 << n) {
        let set: Vec<Vertex> = (0..n as u32).filter(|v| mask >> v & 1 == 1).collect();
        let e = g.induced_edge_count(&set) as i64;
        let d = Ratio::new(2 * e, set.len() as i64);
        if d > best {
            best = d;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{gnp_generate, RandomSource};

    #[test]
    fn empty_and_single_edge() {
        let (d, w) = densest_subgraph(&Graph::empty(5));
        assert_eq!(d, Ratio::from_integer(0));
        assert!(w.is_empty());
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(max_density(&g), Ratio::from_integer(1));
    }

    #[test]
    fn tree_density_is_doubled_edge_ratio() {
        // A tree's densest subgraph is the whole tree: 2(n−1)/n.
        let g = Graph::path(7);
        assert_eq!(max_density(&g), Ratio::new(12, 7));
        let star = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
        assert_eq!(max_density(&star), Ratio::new(10, 6));
    }

    #[test]
    fn complete_graph() {
        let (d, w) = densest_subgraph(&Graph::complete(4));
        assert_eq!(d, Ratio::from_integer(3));
        assert_eq!(w, vec![0, 1, 2, 3]);
    }

    #[test]
    fn pendant_does_not_dilute() {
        // K4 plus a pendant: whole graph has density 14/5 but K4 gives 3.
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)])
            .unwrap();
        let (d, w) = densest_subgraph(&g);
        assert_eq!(d, Ratio::from_integer(3));
        assert_eq!(w, vec![0, 1, 2, 3]);
    }

    #[test]
    fn witness_density_matches_value() {
        for seed in 0..6 {
            let g = gnp_generate(40, 0.2, &RandomSource::new(seed).derive("dens"));
            let (d, w) = densest_subgraph(&g);
            if g.edge_count() == 0 {
                assert_eq!(d, Ratio::from_integer(0));
                continue;
            }
            let e = g.induced_edge_count(&w) as i64;
            assert_eq!(Ratio::new(2 * e, w.len() as i64), d);
        }
    }

    #[test]
    fn matches_enumeration_on_small_graphs() {
        for seed in 0..30 {
            let src = RandomSource::new(1000 + seed).derive("small");
            let n = 4 + (seed as usize % 6); // 4..=9
            let p = 0.15 + 0.1 * (seed % 7) as f64;
            let g = gnp_generate(n, p, &src);
            assert_eq!(max_density(&g), max_density_by_enumeration(&g), "seed {seed}");
        }
    }

    #[test]
    fn density_bounds() {
        for seed in 0..5 {
            let g = gnp_generate(60, 0.15, &RandomSource::new(seed).derive("bounds"));
            let d = max_density(&g);
            if g.edge_count() > 0 {
                assert!(d >= Ratio::new(2 * g.edge_count() as i64, g.n() as i64));
            }
            assert!(d <= Ratio::from_integer(g.max_degree() as i64));
        }
    }
}
