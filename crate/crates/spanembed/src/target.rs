//! Generators for the pattern-graph families the experiments embed:
//! degree-capped random spanning trees, unions of random forests with a
//! density guarantee, and their double subdivisions with girth ≥ 7.
//!
//! Sampling exactly uniformly from "max degree ≤ Δ and density ≤ d" is not
//! tractable, so each family is constructed to satisfy its bounds by design:
//! trees come from a degree-budgeted Prüfer sequence, density-bounded graphs
//! from edge-disjoint forest unions (k forests keep every subgraph below
//! k·(|S|−1) edges), and high-girth graphs from subdividing every edge twice.

use std::collections::BinaryHeap;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::random::RandomSource;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TargetError {
    #[error("family {family} cannot be generated with n = {n}, max degree {delta}, density {d}: {reason}")]
    InfeasibleParameters { family: &'static str, n: usize, delta: usize, d: usize, reason: String },
}

/// Random spanning tree on `n` vertices with maximum degree ≤ `delta`,
/// sampled by drawing a Prüfer sequence in which every vertex appears at
/// most `delta` − 1 times (vertex degree = appearance count + 1), then
/// decoding it. Rejection-free and deterministic per seed.
pub fn capped_prufer_tree(n: usize, delta: usize, src: &RandomSource) -> Result<Graph, TargetError> {
    if delta < 2 {
        return Err(TargetError::InfeasibleParameters {
            family: "spanning_tree",
            n,
            delta,
            d: 0,
            reason: "trees need a degree budget of at least 2".into(),
        });
    }
    if n == 0 {
        return Ok(Graph::empty(0));
    }
    if n == 1 {
        return Ok(Graph::empty(1));
    }
    let mut rng = src.rng();
    // Draw the sequence from a shrinking multiset with delta-1 copies per
    // vertex, guaranteeing the appearance cap.
    let mut pool: Vec<Vertex> = (0..n as Vertex).flat_map(|v| std::iter::repeat_n(v, delta - 1)).collect();
    let mut seq = Vec::with_capacity(n.saturating_sub(2));
    for _ in 0..n - 2 {
        let i = rng.random_range(0..pool.len());
        seq.push(pool.swap_remove(i));
    }
    // Standard Prüfer decode with a min-heap of current leaves.
    let mut remaining_degree = vec![1usize; n];
    for &v in &seq {
        remaining_degree[v as usize] += 1;
    }
    let mut leaves: BinaryHeap<std::cmp::Reverse<Vertex>> = (0..n as Vertex)
        .filter(|&v| remaining_degree[v as usize] == 1)
        .map(std::cmp::Reverse)
        .collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &v in &seq {
        let std::cmp::Reverse(leaf) = leaves.pop().expect("decode always has a leaf");
        edges.push((leaf.min(v), leaf.max(v)));
        remaining_degree[v as usize] -= 1;
        if remaining_degree[v as usize] == 1 {
            leaves.push(std::cmp::Reverse(v));
        }
    }
    let std::cmp::Reverse(a) = leaves.pop().expect("two leaves remain");
    let std::cmp::Reverse(b) = leaves.pop().expect("two leaves remain");
    edges.push((a.min(b), a.max(b)));
    Ok(Graph::from_edges(n, &edges).expect("Prüfer decode yields a simple tree"))
}

/// Number of edge-disjoint forests used for density bound `d`: each forest
/// keeps e(S) ≤ |S|−1 on every subgraph, so k forests give density < 2k ≤ d.
pub fn forest_count_for_density(d: usize) -> usize {
    (d / 2).max(1)
}

/// Union of `forest_count_for_density(d)` randomly relabeled degree-capped
/// trees, giving max degree ≤ `delta` and maximum density ≤ `d` (strictly
/// below 2·⌊d/2⌋) by construction. Duplicate edges across layers are skipped.
pub fn forest_union(n: usize, delta: usize, d: usize, src: &RandomSource) -> Result<Graph, TargetError> {
    let layers = forest_count_for_density(d);
    let per_layer = delta / layers;
    if per_layer < 2 {
        return Err(TargetError::InfeasibleParameters {
            family: "bounded_density",
            n,
            delta,
            d,
            reason: format!("{layers} forest layers need a degree budget of 2 each"),
        });
    }
    if n <= 1 {
        return Ok(Graph::empty(n));
    }
    let mut edges: std::collections::BTreeSet<(Vertex, Vertex)> = std::collections::BTreeSet::new();
    let mut rng = src.derive("relabel").rng();
    for layer in 0..layers {
        let tree = capped_prufer_tree(n, per_layer, &src.derive(&format!("forest{layer}")))?;
        let mut relabel: Vec<Vertex> = (0..n as Vertex).collect();
        relabel.shuffle(&mut rng);
        for (u, v) in tree.edges() {
            let (a, b) = (relabel[u as usize], relabel[v as usize]);
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let edges: Vec<(Vertex, Vertex)> = edges.into_iter().collect();
    Ok(Graph::from_edges(n, &edges).expect("deduplicated tree edges form a simple graph"))
}

/// Replaces every edge (u,v) by a path u–a–b–v through two fresh vertices.
/// Every cycle's length triples, so the result has girth ≥ 9 (or no cycles).
pub fn subdivide_twice(g: &Graph) -> Graph {
    let mut edges = Vec::with_capacity(3 * g.edge_count());
    let mut next = g.n() as Vertex;
    for (u, v) in g.edges() {
        let (a, b) = (next, next + 1);
        next += 2;
        edges.push((u.min(a), u.max(a)));
        edges.push((a.min(b), a.max(b)));
        edges.push((b.min(v), b.max(v)));
    }
    Graph::from_edges(next as usize, &edges).expect("subdivision preserves simplicity")
}

/// Double subdivision of a forest-union base, padded with isolated vertices
/// to exactly `n` vertices. The base size is the largest b with
/// b + 2·layers·(b−1) ≤ n, so the subdivision always fits.
pub fn girth7_target(n: usize, delta: usize, d: usize, src: &RandomSource) -> Result<Graph, TargetError> {
    let layers = forest_count_for_density(d);
    let base_n = (n + 2 * layers) / (2 * layers + 1);
    if base_n < 2 {
        return Err(TargetError::InfeasibleParameters {
            family: "girth7_subdivided",
            n,
            delta,
            d,
            reason: "no room for a base graph with at least one edge".into(),
        });
    }
    let base = forest_union(base_n, delta, d, src)?;
    let subdivided = subdivide_twice(&base);
    assert!(subdivided.n() <= n, "base sizing keeps the subdivision within n");
    let mut edges: Vec<(Vertex, Vertex)> = subdivided.edges().collect();
    edges.sort_unstable();
    Ok(Graph::from_edges(n, &edges).expect("padding adds no edges"))
}

/// Pattern families the experiment harness can generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetFamily {
    SpanningTree,
    BoundedDensity,
    Girth7Subdivided,
}

impl TargetFamily {
    pub fn name(self) -> &'static str {
        match self {
            TargetFamily::SpanningTree => "spanning_tree",
            TargetFamily::BoundedDensity => "bounded_density",
            TargetFamily::Girth7Subdivided => "girth7_subdivided",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "spanning_tree" => Some(TargetFamily::SpanningTree),
            "bounded_density" => Some(TargetFamily::BoundedDensity),
            "girth7_subdivided" => Some(TargetFamily::Girth7Subdivided),
            _ => None,
        }
    }
}

/// Generates one pattern of the family with the given bounds.
pub fn generate_target(
    family: TargetFamily,
    n: usize,
    delta: usize,
    d: usize,
    src: &RandomSource,
) -> Result<Graph, TargetError> {
    match family {
        TargetFamily::SpanningTree => capped_prufer_tree(n, delta, src),
        TargetFamily::BoundedDensity => forest_union(n, delta, d, src),
        TargetFamily::Girth7Subdivided => girth7_target(n, delta, d, src),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::max_density;
    use crate::girth::{girth, Girth};
    use num_rational::Ratio;

    fn is_connected(g: &Graph) -> bool {
        if g.n() == 0 {
            return true;
        }
        g.ball(0, g.n()).len() == g.n()
    }

    #[test]
    fn degree_two_trees_are_hamilton_paths() {
        for seed in 0..10 {
            let t = capped_prufer_tree(5, 2, &RandomSource::new(seed).derive("tree")).unwrap();
            assert_eq!(t.edge_count(), 4, "seed {seed}");
            assert!(t.max_degree() <= 2);
            assert!(is_connected(&t));
        }
    }

    #[test]
    fn trees_respect_cap_and_connectivity() {
        for (seed, (n, delta)) in [(500, 3), (2000, 4), (100, 9), (2, 2), (3, 2)]
            .into_iter()
            .enumerate()
        {
            let t = capped_prufer_tree(n, delta, &RandomSource::new(seed as u64)).unwrap();
            assert_eq!(t.n(), n);
            assert_eq!(t.edge_count(), n - 1);
            assert!(t.max_degree() <= delta, "n={n} delta={delta}");
            assert!(is_connected(&t));
        }
    }

    #[test]
    fn tree_needs_degree_budget() {
        assert!(capped_prufer_tree(5, 1, &RandomSource::new(0)).is_err());
    }

    #[test]
    fn trees_vary_with_seed_but_not_within() {
        let a = capped_prufer_tree(50, 4, &RandomSource::new(1)).unwrap();
        let b = capped_prufer_tree(50, 4, &RandomSource::new(1)).unwrap();
        let c = capped_prufer_tree(50, 4, &RandomSource::new(2)).unwrap();
        assert_eq!(a.edges().collect::<Vec<_>>(), b.edges().collect::<Vec<_>>());
        assert_ne!(a.edges().collect::<Vec<_>>(), c.edges().collect::<Vec<_>>());
    }

    #[test]
    fn forest_union_meets_both_bounds() {
        for seed in 0..10 {
            let g = forest_union(120, 4, 4, &RandomSource::new(seed).derive("fu")).unwrap();
            assert!(g.max_degree() <= 4, "seed {seed}");
            let (density, _) = crate::density::densest_subgraph(&g);
            assert!(density <= Ratio::from_integer(4), "seed {seed}: density {density}");
        }
    }

    #[test]
    fn forest_union_single_layer_is_a_tree() {
        let g = forest_union(60, 3, 2, &RandomSource::new(7)).unwrap();
        assert_eq!(g.edge_count(), 59);
        assert!(max_density(&g) < Ratio::from_integer(2));
    }

    #[test]
    fn forest_union_rejects_thin_degree_budget() {
        // d = 4 needs two layers of degree ≥ 2 each, so delta = 3 is too small.
        assert!(forest_union(50, 3, 4, &RandomSource::new(0)).is_err());
    }

    #[test]
    fn subdividing_k4_gives_sixteen_vertices_and_girth_nine() {
        let g = subdivide_twice(&Graph::complete(4));
        assert_eq!(g.n(), 16);
        assert_eq!(g.edge_count(), 18);
        assert_eq!(girth(&g), Girth::Finite(9));
    }

    #[test]
    fn subdividing_a_triangle() {
        let g = subdivide_twice(&Graph::cycle(3));
        assert_eq!(g.n(), 9);
        assert_eq!(girth(&g), Girth::Finite(9));
        assert!(is_connected(&g));
    }

    #[test]
    fn girth7_targets_have_high_girth_and_exact_size() {
        for seed in 0..8 {
            let g = girth7_target(400, 4, 4, &RandomSource::new(seed).derive("g7")).unwrap();
            assert_eq!(g.n(), 400);
            assert!(g.max_degree() <= 4);
            assert!(girth(&g) >= Girth::Finite(7), "seed {seed}");
        }
    }

    #[test]
    fn girth7_tree_base_has_no_cycles() {
        // d = 2 uses a single forest layer, so the subdivision is acyclic.
        let g = girth7_target(100, 3, 2, &RandomSource::new(3)).unwrap();
        assert_eq!(girth(&g), Girth::Infinite);
    }

    #[test]
    fn family_names_round_trip() {
        for family in [
            TargetFamily::SpanningTree,
            TargetFamily::BoundedDensity,
            TargetFamily::Girth7Subdivided,
        ] {
            assert_eq!(TargetFamily::parse(family.name()), Some(family));
        }
        assert_eq!(TargetFamily::parse("hypercube"), None);
    }

    #[test]
    fn dispatcher_matches_direct_calls() {
        let src = RandomSource::new(11).derive("dispatch");
        let direct = capped_prufer_tree(30, 3, &src).unwrap();
        let via = generate_target(TargetFamily::SpanningTree, 30, 3, 2, &src).unwrap();
        assert_eq!(direct.edges().collect::<Vec<_>>(), via.edges().collect::<Vec<_>>());
    }
}
