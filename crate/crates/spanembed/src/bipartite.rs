//! Bipartite matching with deficiency certificates, plus the auxiliary
//! tuple-containment graph the embedding steps are built on.
//!
//! The matcher is Hopcroft–Karp (layered BFS + batched augmenting DFS). When
//! the maximum matching misses some left vertices, alternating-path
//! reachability from the unmatched ones yields a König-style set U with
//! |N(U)| < |U| — a Hall-condition violation certificate that callers can
//! re-verify by direct recount.
//!
//! The auxiliary graph joins a tuple L of host vertices to a host vertex u
//! exactly when L ⊆ N(u); the empty tuple is adjacent to everything. One left
//! node per tuple occurrence: repeated empty tuples stay distinct nodes.

use thiserror::Error;

use crate::graph::{Graph, Vertex};

/// Bipartite graph on left nodes `0..left_count` and right nodes
/// `0..right_count`, adjacency stored left-to-right.
#[derive(Debug, Clone)]
pub struct BipartiteGraph {
    adj: Vec<Vec<usize>>,
    right_count: usize,
}

impl BipartiteGraph {
    pub fn new(left_count: usize, right_count: usize) -> Self {
        BipartiteGraph { adj: vec![Vec::new(); left_count], right_count }
    }

    pub fn add_edge(&mut self, left: usize, right: usize) {
        assert!(left < self.adj.len() && right < self.right_count);
        self.adj[left].push(right);
    }

    pub fn left_count(&self) -> usize {
        self.adj.len()
    }

    pub fn right_count(&self) -> usize {
        self.right_count
    }

    pub fn neighbors(&self, left: usize) -> &[usize] {
        &self.adj[left]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }
}

/// A set of left nodes whose joint neighborhood is smaller than the set —
/// the certificate that no left-saturating matching exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HallWitness {
    pub left_indices: Vec<usize>,
    pub neighborhood_size: usize,
}

/// Maximum matching plus, when the left side is not saturated, a Hall
/// violation certificate.
#[derive(Debug, Clone)]
pub struct MatchingResult {
    /// Per left node, the matched right node.
    pub pairs: Vec<Option<usize>>,
    pub size: usize,
    pub witness: Option<HallWitness>,
}

impl MatchingResult {
    pub fn saturates_left(&self) -> bool {
        self.pairs.iter().all(Option::is_some)
    }
}

const UNMATCHED: usize = usize::MAX;

/// Hopcroft–Karp maximum matching; deterministic given the graph's edge order.
pub fn max_matching(b: &BipartiteGraph) -> MatchingResult {
    let (nl, nr) = (b.left_count(), b.right_count());
    let mut match_l = vec![UNMATCHED; nl];
    let mut match_r = vec![UNMATCHED; nr];
    let mut dist = vec![usize::MAX; nl];
    loop {
        // BFS from free left nodes to build the layer structure.
        let mut queue = std::collections::VecDeque::new();
        for l in 0..nl {
            if match_l[l] == UNMATCHED {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut found_free_right = false;
        while let Some(l) = queue.pop_front() {
            for &r in b.neighbors(l) {
                let l2 = match_r[r];
                if l2 == UNMATCHED {
                    found_free_right = true;
                } else if dist[l2] == usize::MAX {
                    dist[l2] = dist[l] + 1;
                    queue.push_back(l2);
                }
            }
        }
        if !found_free_right {
            break;
        }
        // Batched augmentation along shortest alternating paths.
        fn augment(
            b: &BipartiteGraph,
            l: usize,
            match_l: &mut [usize],
            match_r: &mut [usize],
            dist: &mut [usize],
        ) -> bool {
            for &r in b.neighbors(l) {
                let l2 = match_r[r];
                if l2 == UNMATCHED
                    || (dist[l2] == dist[l] + 1 && augment(b, l2, match_l, match_r, dist))
                {
                    match_l[l] = r;
                    match_r[r] = l;
                    return true;
                }
            }
            dist[l] = usize::MAX;
            false
        }
        for l in 0..nl {
            if match_l[l] == UNMATCHED {
                augment(b, l, &mut match_l, &mut match_r, &mut dist);
            }
        }
    }
    let size = match_l.iter().filter(|&&r| r != UNMATCHED).count();
    let pairs: Vec<Option<usize>> =
        match_l.iter().map(|&r| (r != UNMATCHED).then_some(r)).collect();
    let witness = (size < nl).then(|| extract_witness(b, &match_l, &match_r));
    MatchingResult { pairs, size, witness }
}

/// König-style construction: alternating reachability from the unmatched left
/// nodes. Every reachable right node is matched back into the reachable left
/// set, so the reachable lefts outnumber their joint neighborhood.
fn extract_witness(b: &BipartiteGraph, match_l: &[usize], match_r: &[usize]) -> HallWitness {
    let mut seen_l = vec![false; match_l.len()];
    let mut seen_r = vec![false; match_r.len()];
    let mut stack: Vec<usize> =
        (0..match_l.len()).filter(|&l| match_l[l] == UNMATCHED).collect();
    for &l in &stack {
        seen_l[l] = true;
    }
    while let Some(l) = stack.pop() {
        for &r in b.neighbors(l) {
            if !seen_r[r] {
                seen_r[r] = true;
                let l2 = match_r[r];
                if l2 != UNMATCHED && !seen_l[l2] {
                    seen_l[l2] = true;
                    stack.push(l2);
                }
            }
        }
    }
    let left_indices: Vec<usize> = (0..match_l.len()).filter(|&l| seen_l[l]).collect();
    let neighborhood_size = seen_r.iter().filter(|&&s| s).count();
    let witness = HallWitness { left_indices, neighborhood_size };
    debug_assert!(check_hall_witness(b, &witness));
    witness
}

/// Independent recount: does `w.left_indices` really have a joint
/// neighborhood of `w.neighborhood_size` vertices, smaller than itself?
pub fn check_hall_witness(b: &BipartiteGraph, w: &HallWitness) -> bool {
    let mut seen = vec![false; b.right_count()];
    for &l in &w.left_indices {
        for &r in b.neighbors(l) {
            seen[r] = true;
        }
    }
    let count = seen.iter().filter(|&&s| s).count();
    count == w.neighborhood_size && count < w.left_indices.len()
}

/// Exhaustive maximum-matching size; exponential, for cross-checking small
/// instances (≤ ~10 left nodes).
pub fn max_matching_by_enumeration(b: &BipartiteGraph) -> usize {
    fn go(b: &BipartiteGraph, l: usize, used: &mut [bool]) -> usize {
        if l == b.left_count() {
            return 0;
        }
        let mut best = go(b, l + 1, used); // leave l unmatched
        for &r in b.neighbors(l) {
            if !used[r] {
                used[r] = true;
                best = best.max(1 + go(b, l + 1, used));
                used[r] = false;
            }
        }
        best
    }
    assert!(b.left_count() <= 10, "enumeration oracle limited to small instances");
    go(b, 0, &mut vec![false; b.right_count()])
}

// ==== auxiliary tuple-containment graph ========================================

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AuxError {
    #[error("tuples {a} and {b} share vertex {shared}")]
    OverlappingTuples { a: usize, b: usize, shared: Vertex },
}

/// Bipartite graph between host-vertex tuples and host vertices, with an edge
/// (L, u) exactly when L ⊆ N_G(u).
#[derive(Debug, Clone)]
pub struct AuxBipartite {
    pub tuples: Vec<Vec<Vertex>>,
    pub right: Vec<Vertex>,
    pub graph: BipartiteGraph,
}

/// Builds the containment graph. Nonempty tuples must be pairwise disjoint;
/// the empty tuple is adjacent to every right vertex and may repeat.
pub fn build_aux(
    g: &Graph,
    tuples: Vec<Vec<Vertex>>,
    right: Vec<Vertex>,
) -> Result<AuxBipartite, AuxError> {
    let mut owner: std::collections::HashMap<Vertex, usize> = std::collections::HashMap::new();
    for (i, tuple) in tuples.iter().enumerate() {
        for &v in tuple {
            if let Some(&a) = owner.get(&v) {
                return Err(AuxError::OverlappingTuples { a, b: i, shared: v });
            }
            owner.insert(v, i);
        }
    }
    let mut graph = BipartiteGraph::new(tuples.len(), right.len());
    let mut is_neighbor = vec![false; g.n()];
    for (j, &u) in right.iter().enumerate() {
        for &w in g.neighbors(u) {
            is_neighbor[w as usize] = true;
        }
        for (i, tuple) in tuples.iter().enumerate() {
            if tuple.iter().all(|&v| is_neighbor[v as usize]) {
                graph.add_edge(i, j);
            }
        }
        for &w in g.neighbors(u) {
            is_neighbor[w as usize] = false;
        }
    }
    Ok(AuxBipartite { tuples, right, graph })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    use crate::random::{gnp_generate, RandomSource};

    fn from_edges(nl: usize, nr: usize, edges: &[(usize, usize)]) -> BipartiteGraph {
        let mut b = BipartiteGraph::new(nl, nr);
        for &(l, r) in edges {
            b.add_edge(l, r);
        }
        b
    }

    #[test]
    fn complete_three_by_three_saturates() {
        let edges: Vec<_> = (0..3).flat_map(|l| (0..3).map(move |r| (l, r))).collect();
        let m = max_matching(&from_edges(3, 3, &edges));
        assert_eq!(m.size, 3);
        assert!(m.saturates_left());
        assert!(m.witness.is_none());
    }

    #[test]
    fn bottleneck_produces_witness() {
        // Both left nodes only see right node 0.
        let b = from_edges(2, 2, &[(0, 0), (1, 0)]);
        let m = max_matching(&b);
        assert_eq!(m.size, 1);
        let w = m.witness.unwrap();
        assert_eq!(w.left_indices, vec![0, 1]);
        assert_eq!(w.neighborhood_size, 1);
        assert!(check_hall_witness(&b, &w));
    }

    #[test]
    fn isolated_left_node_is_its_own_witness() {
        let b = from_edges(2, 3, &[(0, 1)]);
        let m = max_matching(&b);
        assert_eq!(m.size, 1);
        let w = m.witness.unwrap();
        assert_eq!(w.left_indices, vec![1]);
        assert_eq!(w.neighborhood_size, 0);
    }

    #[test]
    fn matches_enumeration_on_random_instances() {
        let mut rng = RandomSource::new(31).derive("bip").rng();
        for trial in 0..300 {
            let nl = 1 + (trial % 8);
            let nr = 1 + (trial % 9);
            let mut b = BipartiteGraph::new(nl, nr);
            for l in 0..nl {
                for r in 0..nr {
                    if rng.random::<f64>() < 0.35 {
                        b.add_edge(l, r);
                    }
                }
            }
            let m = max_matching(&b);
            assert_eq!(m.size, max_matching_by_enumeration(&b), "trial {trial}");
            match m.witness {
                Some(w) => {
                    assert!(m.size < nl);
                    assert!(check_hall_witness(&b, &w), "trial {trial}");
                }
                None => assert_eq!(m.size, nl),
            }
            // Matched pairs are consistent and distinct.
            let mut used = vec![false; nr];
            for (l, pair) in m.pairs.iter().enumerate() {
                if let Some(r) = pair {
                    assert!(b.neighbors(l).contains(r));
                    assert!(!used[*r]);
                    used[*r] = true;
                }
            }
        }
    }

    #[test]
    fn empty_tuple_is_adjacent_to_all() {
        let g = Graph::path(4);
        let aux = build_aux(&g, vec![vec![]], vec![0, 1, 2, 3]).unwrap();
        assert_eq!(aux.graph.neighbors(0), &[0, 1, 2, 3]);
    }

    #[test]
    fn star_center_tuple_reaches_all_leaves() {
        let g = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
        let aux = build_aux(&g, vec![vec![0]], vec![1, 2, 3, 4, 5]).unwrap();
        assert_eq!(aux.graph.neighbors(0).len(), 5);
    }

    #[test]
    fn cycle_pair_tuple_narrows_candidates() {
        // In C_5 only vertex 1 is adjacent to both 0 and 2.
        let g = Graph::cycle(5);
        let aux = build_aux(&g, vec![vec![0, 2]], vec![1, 3, 4]).unwrap();
        assert_eq!(aux.graph.neighbors(0), &[0]);
        assert_eq!(aux.right[0], 1);
    }

    #[test]
    fn overlap_is_rejected() {
        let g = Graph::path(4);
        let err = build_aux(&g, vec![vec![0, 1], vec![2, 1]], vec![3]).unwrap_err();
        assert_eq!(err, AuxError::OverlappingTuples { a: 0, b: 1, shared: 1 });
    }

    #[test]
    fn containment_checked_against_graph() {
        for seed in 0..5 {
            let g = gnp_generate(30, 0.3, &RandomSource::new(seed).derive("aux"));
            let tuples = vec![vec![0, 1], vec![2], vec![]];
            let right: Vec<Vertex> = (3..30).collect();
            let aux = build_aux(&g, tuples.clone(), right.clone()).unwrap();
            for (i, tuple) in tuples.iter().enumerate() {
                let listed: std::collections::HashSet<usize> =
                    aux.graph.neighbors(i).iter().copied().collect();
                for (j, &u) in right.iter().enumerate() {
                    let expected = tuple.iter().all(|&v| g.has_edge(v, u));
                    assert_eq!(listed.contains(&j), expected, "tuple {i} vs {u}");
                }
            }
        }
    }
}
