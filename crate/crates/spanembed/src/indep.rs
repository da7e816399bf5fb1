//! Degeneracy orderings and greedy k-independent sets.
//!
//! A set is k-independent when its vertices are pairwise more than k apart in
//! the ambient graph. The greedy routine repeatedly takes the lowest-index
//! surviving candidate and discards everything within distance k of it; with a
//! degree cap d on the candidates this keeps at least ⌈|S|/(d·Δᵏ)⌉ of them.
//! The degeneracy ordering removes a minimum-degree vertex (lowest index on
//! ties) until the graph is gone, then reverses, so every vertex ends up with
//! at most d neighbors among its predecessors; if the minimum degree ever
//! exceeds d the remaining set is itself the failure certificate.

use thiserror::Error;

use crate::graph::{Graph, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DegeneracyError {
    #[error("graph is not {d}-degenerate: {} vertices remain with induced min degree > {d}", witness.len())]
    NotDDegenerate { d: usize, witness: Vec<Vertex> },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IndependenceError {
    #[error("vertex {v} has degree {degree}, above the cap {cap}")]
    DegreeCapViolated { v: Vertex, degree: usize, cap: usize },
    #[error("degree bound violated: d·n = {d}·{n} < 2|E| = {doubled_edges}")]
    PreconditionViolated { d: usize, n: usize, doubled_edges: usize },
}

/// Ordering v_1..v_n with every vertex having at most `d` neighbors among its
/// predecessors, or the certificate that none exists.
///
/// Built by repeatedly deleting a minimum-degree vertex (lowest index on ties)
/// and reversing the deletion sequence. If the induced minimum degree ever
/// exceeds `d`, the surviving set witnesses that the graph is not
/// d-degenerate, and it is returned sorted.
pub fn degeneracy_order(h: &Graph, d: usize) -> Result<Vec<Vertex>, DegeneracyError> {
    let n = h.n();
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|v| h.degree(v as Vertex)).collect();
    let mut removal = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("loop runs once per remaining vertex");
        if deg[v] > d {
            let witness = (0..n as Vertex).filter(|&w| alive[w as usize]).collect();
            return Err(DegeneracyError::NotDDegenerate { d, witness });
        }
        alive[v] = false;
        removal.push(v as Vertex);
        for &w in h.neighbors(v as Vertex) {
            if alive[w as usize] {
                deg[w as usize] -= 1;
            }
        }
    }
    removal.reverse();
    Ok(removal)
}

/// Checks that `order` is a permutation of the vertices in which every vertex
/// has at most `d` neighbors among its predecessors.
pub fn check_back_degree(h: &Graph, order: &[Vertex], d: usize) -> bool {
    if order.len() != h.n() {
        return false;
    }
    let mut pos = vec![usize::MAX; h.n()];
    for (i, &v) in order.iter().enumerate() {
        if pos[v as usize] != usize::MAX {
            return false;
        }
        pos[v as usize] = i;
    }
    order.iter().all(|&v| {
        let back =
            h.neighbors(v).iter().filter(|&&w| pos[w as usize] < pos[v as usize]).count();
        back <= d
    })
}

/// Greedy k-independent subset of `S`: repeatedly keep the lowest-index
/// survivor and drop everything within distance `k` of it (distances in `g`).
///
/// Pre: every vertex of `S` has degree ≤ `d` in `g` (checked). When Δ(g) ≥ 2
/// the result has size ≥ ⌈|S|/(d·Δᵏ)⌉, asserted internally.
pub fn k_independent_in_subset(
    g: &Graph,
    s: &[Vertex],
    k: usize,
    d: usize,
) -> Result<Vec<Vertex>, IndependenceError> {
    for &v in s {
        let degree = g.degree(v);
        if degree > d {
            return Err(IndependenceError::DegreeCapViolated { v, degree, cap: d });
        }
    }
    let mut in_pool = vec![false; g.n()];
    for &v in s {
        in_pool[v as usize] = true;
    }
    let mut candidates: Vec<Vertex> = s.to_vec();
    candidates.sort_unstable();
    candidates.dedup();
    let mut picked = Vec::new();
    for &v in &candidates {
        if !in_pool[v as usize] {
            continue;
        }
        picked.push(v);
        for w in g.ball(v, k) {
            in_pool[w as usize] = false;
        }
    }
    let delta = g.max_degree();
    if delta >= 2 && d >= 1 {
        let denom = (d as u128).saturating_mul((delta as u128).saturating_pow(k as u32));
        let bound = (candidates.len() as u128).div_ceil(denom);
        assert!(
            picked.len() as u128 >= bound,
            "greedy kept {} of {}, below the guaranteed ⌈|S|/(dΔᵏ)⌉ = {bound}",
            picked.len(),
            candidates.len()
        );
    }
    Ok(picked)
}

/// Greedy k-independent set drawn from the degree-≤-d vertices of `g`.
///
/// Pre: d·n ≥ 2|E| (checked), which forces |D_{≤d}| ≥ n/(d+1) — asserted —
/// so when Δ(g) ≥ 2 the result has size ≥ ⌈n/((d+1)·d·Δᵏ)⌉, also asserted.
pub fn k_independent_low_degree(
    g: &Graph,
    d: usize,
    k: usize,
) -> Result<Vec<Vertex>, IndependenceError> {
    let n = g.n();
    let doubled_edges = 2 * g.edge_count();
    if d * n < doubled_edges {
        return Err(IndependenceError::PreconditionViolated { d, n, doubled_edges });
    }
    let low: Vec<Vertex> = (0..n as Vertex).filter(|&v| g.degree(v) <= d).collect();
    assert!(low.len() * (d + 1) >= n, "degree-≤-d set smaller than n/(d+1)");
    let picked = k_independent_in_subset(g, &low, k, d)?;
    let delta = g.max_degree();
    if delta >= 2 && d >= 1 {
        let denom = ((d + 1) as u128 * d as u128)
            .saturating_mul((delta as u128).saturating_pow(k as u32));
        let bound = (n as u128).div_ceil(denom);
        assert!(
            picked.len() as u128 >= bound,
            "kept {} vertices, below the guaranteed ⌈n/((d+1)dΔᵏ)⌉ = {bound}",
            picked.len()
        );
    }
    Ok(picked)
}

/// Independent re-check that `set` is k-independent in `g`: all pairwise BFS
/// distances ≥ k+1.
pub fn check_k_independent(g: &Graph, set: &[Vertex], k: usize) -> bool {
    for (i, &u) in set.iter().enumerate() {
        for &v in &set[i + 1..] {
            if g.distance_up_to(u, v, k).is_some() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{gnp_generate, RandomSource};

    #[test]
    fn star_orders_center_first() {
        let star = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
        // Low-degree leaves are removed first; once only {0, 5} remain both
        // have degree 1 and the lowest index (the center) goes next, so the
        // reversed order starts 5, 0 and every vertex has ≤ 1 back-neighbor.
        let order = degeneracy_order(&star, 1).unwrap();
        assert_eq!(order, vec![5, 0, 4, 3, 2, 1]);
        assert!(check_back_degree(&star, &order, 1));
    }

    #[test]
    fn k4_is_not_2_degenerate() {
        let err = degeneracy_order(&Graph::complete(4), 2).unwrap_err();
        assert_eq!(err, DegeneracyError::NotDDegenerate { d: 2, witness: vec![0, 1, 2, 3] });
        // The witness really does have induced min degree > 2.
        let g = Graph::complete(4);
        let DegeneracyError::NotDDegenerate { witness, .. } =
            degeneracy_order(&g, 2).unwrap_err();
        let mask = vec![true; 4];
        assert!(witness.iter().all(|&v| g.degree_within(v, &mask) > 2));
    }

    #[test]
    fn c6_is_2_degenerate() {
        let g = Graph::cycle(6);
        let order = degeneracy_order(&g, 2).unwrap();
        assert!(check_back_degree(&g, &order, 2));
        assert!(degeneracy_order(&g, 1).is_err());
    }

    #[test]
    fn random_graphs_validate_and_witness() {
        for seed in 0..10 {
            let g = gnp_generate(30, 0.2, &RandomSource::new(seed).derive("degen"));
            let mut d = 0;
            let order = loop {
                match degeneracy_order(&g, d) {
                    Ok(o) => break o,
                    Err(DegeneracyError::NotDDegenerate { witness, .. }) => {
                        let mut mask = vec![false; g.n()];
                        for &v in &witness {
                            mask[v as usize] = true;
                        }
                        assert!(witness.iter().all(|&v| g.degree_within(v, &mask) > d));
                        d += 1;
                    }
                }
            };
            assert!(check_back_degree(&g, &order, d));
        }
    }

    #[test]
    fn empty_graph_keeps_everything() {
        let g = Graph::empty(5);
        let all: Vec<Vertex> = (0..5).collect();
        let u = k_independent_in_subset(&g, &all, 2, 3).unwrap();
        assert_eq!(u, all);
        let u = k_independent_low_degree(&g, 1, 4).unwrap();
        assert_eq!(u, all);
    }

    #[test]
    fn path_greedy_two_independent() {
        let g = Graph::path(5);
        let all: Vec<Vertex> = (0..5).collect();
        // Picking 0 discards its 2-ball {0,1,2}; picking 3 discards {1..=4}.
        let u = k_independent_in_subset(&g, &all, 2, 2).unwrap();
        assert_eq!(u, vec![0, 3]);
        assert!(check_k_independent(&g, &u, 2));
    }

    #[test]
    fn degree_cap_is_enforced() {
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let err = k_independent_in_subset(&star, &[0, 1], 1, 2).unwrap_err();
        assert_eq!(err, IndependenceError::DegreeCapViolated { v: 0, degree: 3, cap: 2 });
    }

    #[test]
    fn c6_low_degree_greedy() {
        let g = Graph::cycle(6);
        let u = k_independent_low_degree(&g, 2, 1).unwrap();
        assert_eq!(u, vec![0, 2, 4]);
        assert!(check_k_independent(&g, &u, 1));
    }

    #[test]
    fn low_degree_precondition() {
        let g = Graph::complete(4); // 2|E| = 12 > 1·4
        assert_eq!(
            k_independent_low_degree(&g, 1, 1).unwrap_err(),
            IndependenceError::PreconditionViolated { d: 1, n: 4, doubled_edges: 12 }
        );
    }

    #[test]
    fn random_sets_are_independent_with_bound() {
        for seed in 0..10 {
            let g = gnp_generate(60, 0.05, &RandomSource::new(seed).derive("kind"));
            let d = g.max_degree().max(1);
            for k in 1..=3 {
                let u = k_independent_low_degree(&g, d, k).unwrap();
                assert!(check_k_independent(&g, &u, k), "seed {seed} k {k}");
            }
        }
    }
}
